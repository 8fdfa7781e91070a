// gasnet: scenario runs, scheme comparisons, convergence studies,
// steady-state audits, and timing benchmarks for the pipe-network model.
// Exit codes: 0 success, 1 numerical failure, 2 input error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gasnet/analysis.hpp"
#include "gasnet/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace gasnet;

namespace {

constexpr double oscillation_flag_threshold = 1e-4;

struct Options {
    std::string case_name;
    std::string network_path;
    std::string scenario_path;
    std::string scheme;
    std::string schemes = "new,mid,end";
    std::string source;
    std::string eig_sum;
    bool verbatim_source = false;
    int cells = 0;
    double dt = 0.0;
    double t_end = 0.0;
    std::string out_dir = "out";
    std::string target = "steady_residual";
    int levels = 4;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Network regrid(const Network& net, int cells) {
    std::vector<Pipe> pipes = net.pipes();
    for (Pipe& pp : pipes) pp.cells = cells;
    return Network(net.law(), net.nodes(), std::move(pipes));
}

Scenario load_scenario(const Options& opt) {
    if (opt.case_name.empty() == opt.scenario_path.empty())
        throw std::invalid_argument("give exactly one of --case or --scenario");
    Scenario sc = opt.case_name.empty()
                      ? parse_scenario(slurp(opt.scenario_path),
                                       fs::path(opt.scenario_path).parent_path().string())
                      : builtin_case(opt.case_name);
    if (!opt.network_path.empty()) sc.network = parse_network(slurp(opt.network_path));
    if (opt.cells > 0) sc.network = regrid(sc.network, opt.cells);
    if (!opt.scheme.empty()) sc.scheme.kind = scheme_kind_from(opt.scheme);
    if (!opt.source.empty())
        sc.scheme.source =
            opt.source == "simpson" ? SourceQuadrature::simpson : SourceQuadrature::midpoint;
    if (!opt.eig_sum.empty())
        sc.scheme.eig_sum =
            opt.eig_sum == "derived" ? EigenvalueSum::derived : EigenvalueSum::printed;
    if (opt.verbatim_source) sc.scheme.verbatim_source = true;
    if (opt.dt > 0.0) sc.integrator.dt = opt.dt;
    if (opt.t_end > 0.0) sc.t_end = opt.t_end;
    if (sc.name.empty()) sc.name = "scenario";
    return sc;
}

// Probe location for the oscillation metric: the supply (first pressure
// boundary) end's mass flux. The pressure there is algebraically pinned to
// its signal (total variation identically zero), so the flux is the quantity
// that reacts to every reflected wave.
PipeEnd supply_end(const Network& net) {
    for (const Node& nd : net.nodes())
        if (nd.kind == NodeKind::pressure_boundary)
            return net.ends_at(net.node_index(nd.id)).front();
    throw std::invalid_argument("network has no pressure boundary");
}

PipeEnd outlet_end(const Network& net) {
    for (const Node& nd : net.nodes())
        if (nd.kind == NodeKind::flux_boundary)
            return net.ends_at(net.node_index(nd.id)).front();
    return PipeEnd{static_cast<int>(net.pipes().size()) - 1, true};
}

int end_cell(const Network& net, const PipeEnd& end) {
    return end.at_outlet ? net.grid(end.pipe).n : 0;
}

double probe_metric(const Trajectory& traj, const Network& net) {
    if (traj.states.size() < 3) return 0.0; // too few snapshots to measure
    const PipeEnd end = supply_end(net);
    return oscillation_metric(flux_series(traj, end.pipe, end_cell(net, end)));
}

struct RunStats {
    double wall_s = 0.0;
    double max_residual = 0.0;
    double avg_newton = 0.0;
    double osc = 0.0;
    double outlet_p = 0.0;
    long steps = 0;
};

RunStats timed_run(const Scenario& sc, Trajectory& traj) {
    const auto t0 = std::chrono::steady_clock::now();
    traj = simulate(sc);
    const auto t1 = std::chrono::steady_clock::now();
    RunStats st;
    st.wall_s = std::chrono::duration<double>(t1 - t0).count();
    st.steps = static_cast<long>(traj.steps.size());
    long iters = 0;
    for (const StepDiag& d : traj.steps) {
        st.max_residual = std::max(st.max_residual, d.constraint_residual);
        iters += d.newton_iters;
    }
    st.avg_newton = st.steps ? static_cast<double>(iters) / static_cast<double>(st.steps) : 0.0;
    st.osc = probe_metric(traj, sc.network);
    const PipeEnd out = outlet_end(sc.network);
    st.outlet_p = traj.states.back().pipes[out.pipe].p[end_cell(sc.network, out)];
    return st;
}

struct Report {
    std::ostringstream text;
    std::vector<std::string> artifacts;
    fs::path dir;

    explicit Report(const std::string& out_dir) : dir(out_dir) { fs::create_directories(dir); }

    std::string path(const std::string& name) {
        std::string p = (dir / name).string();
        artifacts.push_back(p);
        return p;
    }

    int finish() {
        const std::string summary = (dir / "summary.txt").string();
        artifacts.push_back(summary);
        text << "artifacts:\n";
        for (const std::string& a : artifacts) text << "  " << a << "\n";
        std::ofstream out(summary);
        out << text.str();
        std::cout << text.str();
        return out ? 0 : 1;
    }
};

void describe(Report& rep, const Scenario& sc) {
    rep.text << "case: " << sc.name << "\n"
             << "scheme: " << scheme_kind_name(sc.scheme.kind)
             << " (source=" << (sc.scheme.source == SourceQuadrature::simpson ? "simpson" : "midpoint")
             << ", eig_sum=" << (sc.scheme.eig_sum == EigenvalueSum::derived ? "derived" : "printed")
             << ", verbatim_source=" << (sc.scheme.verbatim_source ? "true" : "false") << ")\n";
}

void describe(Report& rep, const RunStats& st) {
    rep.text << "steps: " << st.steps << "  wall_s: " << st.wall_s
             << "  avg_newton_iters: " << st.avg_newton << "\n"
             << "max_constraint_residual: " << st.max_residual << "\n"
             << "outlet_pressure_bar: " << pa_to_bar(st.outlet_p) << "\n"
             << "supply_flux_oscillation_metric: " << st.osc << "\n";
    if (st.osc > oscillation_flag_threshold)
        rep.text << "FLAG: persistent oscillation metric above " << oscillation_flag_threshold
                 << "\n";
}

int cmd_run(const Options& opt) {
    Scenario sc = load_scenario(opt);
    Report rep(opt.out_dir);
    describe(rep, sc);
    Trajectory traj;
    const RunStats st = timed_run(sc, traj);
    describe(rep, st);
    const NetState& fin = traj.states.back();
    double pmin = fin.pipes[0].p[0], pmax = pmin, qmin = fin.pipes[0].q[0], qmax = qmin;
    for (const PipeState& ps : fin.pipes) {
        for (double v : ps.p) pmin = std::min(pmin, v), pmax = std::max(pmax, v);
        for (double v : ps.q) qmin = std::min(qmin, v), qmax = std::max(qmax, v);
    }
    rep.text << "final_state: p in [" << pa_to_bar(pmin) << ", " << pa_to_bar(pmax)
             << "] bar, q in [" << qmin << ", " << qmax << "] kg/s\n";
    write_csv(traj, sc.network, rep.path(sc.name + ".csv"));
    std::ofstream(rep.path(sc.name + "_scenario.json")) << print_scenario(sc);
    return rep.finish();
}

int cmd_compare(const Options& opt) {
    std::vector<std::string> names;
    std::stringstream ss(opt.schemes);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) names.push_back(tok);
    if (names.size() < 2) throw std::invalid_argument("compare needs at least two schemes");

    Scenario sc = load_scenario(opt);
    Report rep(opt.out_dir);
    describe(rep, sc);
    rep.text << "schemes: " << opt.schemes << "\n\n"
             << "scheme   wall_s      oscillation   outlet_p_bar\n";
    double p_lo = 0.0, p_hi = 0.0;
    bool first = true;
    for (const std::string& name : names) {
        Scenario run = sc;
        run.scheme.kind = scheme_kind_from(name);
        Trajectory traj;
        const RunStats st = timed_run(run, traj);
        char line[160];
        std::snprintf(line, sizeof line, "%-8s %-11.4g %-13.4g %.6f\n", name.c_str(), st.wall_s,
                      st.osc, pa_to_bar(st.outlet_p));
        rep.text << line;
        write_csv(traj, run.network, rep.path(sc.name + "_" + name + ".csv"));
        p_lo = first ? st.outlet_p : std::min(p_lo, st.outlet_p);
        p_hi = first ? st.outlet_p : std::max(p_hi, st.outlet_p);
        first = false;
    }
    rep.text << "\nmax_cross_scheme_outlet_deviation_bar: " << pa_to_bar(p_hi - p_lo) << "\n";
    return rep.finish();
}

// Strong-friction single pipe used for the steady-residual order study; the
// source-term error dominates here, so the quadrature order is visible.
struct SteadyStudyConfig {
    PressureLaw law = PressureLaw::isothermal(100.0);
    PipeGeometry geom = PipeGeometry::create(1000.0, 0.5, 2.0);
    double C_q = 5.0;
    double p_in = 2.0e5;
};

double steady_residual_at(const SteadyStudyConfig& cfg, int n, SourceQuadrature source) {
    const PipeGrid grid = PipeGrid::create(cfg.geom, cfg.law, n);
    std::vector<double> xs(grid.points());
    for (int i = 0; i < grid.points(); ++i) xs[i] = grid.x(i);
    PipeState st;
    st.p = continuous_steady_profile(cfg.law, cfg.geom, cfg.C_q, cfg.p_in, xs, 1e-12);
    st.q.assign(grid.points(), cfg.C_q);
    SchemeOptions opts;
    opts.source = source;
    return steady_residual(grid, opts, st);
}

int cmd_convergence(const Options& opt) {
    if (opt.levels < 3) throw std::invalid_argument("convergence needs at least 3 levels");
    Report rep(opt.out_dir);
    rep.text << "target: " << opt.target << "\nlevels: " << opt.levels << "\n\n";
    std::ofstream rates(rep.path("rates.csv"));

    if (opt.target == "steady_residual") {
        std::vector<SourceQuadrature> sources;
        if (opt.source.empty() || opt.source == "midpoint") sources.push_back(SourceQuadrature::midpoint);
        if (opt.source.empty() || opt.source == "simpson") sources.push_back(SourceQuadrature::simpson);
        const SteadyStudyConfig cfg;
        rates << "source,cells,dx,residual\n";
        for (SourceQuadrature src : sources) {
            const char* sname = src == SourceQuadrature::simpson ? "simpson" : "midpoint";
            std::vector<double> hs, errs;
            rep.text << "source " << sname << ":\n    cells        dx          residual\n";
            for (int k = 0; k < opt.levels; ++k) {
                const int n = 8 << k;
                const double r = steady_residual_at(cfg, n, src);
                hs.push_back(cfg.geom.length / n);
                errs.push_back(r);
                char line[128];
                std::snprintf(line, sizeof line, "    %-12d %-11.4g %.6e\n", n, hs.back(), r);
                rep.text << line;
                rates << sname << "," << n << "," << hs.back() << "," << r << "\n";
            }
            rep.text << "  fitted slope: " << loglog_slope(hs, errs) << "\n";
        }
    } else if (opt.target == "uniform_flow") {
        // rho stays rho0 and q(t) = 1/(C0 + C1 t) on every cell; space is
        // resolved exactly, so the error decays with the time step.
        const double rho0 = 1.0, C0 = 1.0;
        PressureLaw law = PressureLaw::isothermal(10.0);
        PipeGeometry geom = PipeGeometry::create(100.0, 0.1, 0.002, 1.0);
        const double p0 = law.p_of_rho(rho0), t_end = 100.0;
        std::vector<double> hs, errs;
        rates << "dt,linf_rel_error\n";
        rep.text << "    dt          linf_rel_error\n";
        for (int k = 0; k < opt.levels; ++k) {
            const double dt = 4.0 / (1 << k);
            std::vector<Node> nodes{{"in", NodeKind::pressure_boundary, {}},
                                    {"out", NodeKind::flux_boundary, {}}};
            std::vector<Pipe> pipes{{"p1", "in", "out", geom, 16}};
            Scenario sc(Network(law, std::move(nodes), std::move(pipes)));
            sc.signals.emplace("in", Signal::constant(p0, SignalUnit::pa));
            Signal demand;
            demand.unit = SignalUnit::kg_per_s;
            demand.interp = SignalInterp::linear;
            for (double t = 0.0; t <= t_end + 0.5 * dt; t += dt) {
                double rho, q;
                uniform_flow_reference(rho0, C0, geom, t, rho, q);
                demand.points.emplace_back(t, q);
            }
            sc.signals.emplace("out", std::move(demand));
            sc.t_end = t_end;
            sc.output_dt = t_end;
            double q0;
            {
                double rho;
                uniform_flow_reference(rho0, C0, geom, 0.0, rho, q0);
            }
            sc.init = InitSpec::uniform(p0, q0);
            sc.integrator.dt = dt;
            sc.integrator.newton_tol = 1e-12;
            const Trajectory traj = simulate(sc);
            double rho_ref, q_ref;
            uniform_flow_reference(rho0, C0, geom, t_end, rho_ref, q_ref);
            const double p_ref = law.p_of_rho(rho_ref);
            double err = 0.0;
            const PipeState& fin = traj.states.back().pipes[0];
            for (std::size_t i = 0; i < fin.p.size(); ++i) {
                err = std::max(err, std::abs(fin.p[i] - p_ref) / p_ref);
                err = std::max(err, std::abs(fin.q[i] - q_ref) / q_ref);
            }
            hs.push_back(dt);
            errs.push_back(err);
            char line[96];
            std::snprintf(line, sizeof line, "    %-11.4g %.6e\n", dt, err);
            rep.text << line;
            rates << dt << "," << err << "\n";
        }
        rep.text << "fitted slope: " << loglog_slope(hs, errs) << "\n";
    } else if (opt.target == "traveling_wave") {
        // Central-difference mass residual of the exact wave; second order.
        rates << "dx,mass_residual\n";
        rep.text << "    dx          mass_residual\n";
        std::vector<double> hs, errs;
        for (int k = 0; k < opt.levels; ++k) {
            const double dx = 0.04 / (1 << k);
            const double r = traveling_wave_mass_residual(0.5, 0.6, 2.0, dx);
            hs.push_back(dx);
            errs.push_back(r);
            char line[96];
            std::snprintf(line, sizeof line, "    %-11.4g %.6e\n", dx, r);
            rep.text << line;
            rates << dx << "," << r << "\n";
        }
        rep.text << "fitted slope: " << loglog_slope(hs, errs) << "\n";
    } else {
        throw std::invalid_argument("unknown convergence target '" + opt.target + "'");
    }
    return rep.finish();
}

int cmd_steady(const Options& opt) {
    Scenario sc = load_scenario(opt);
    Report rep(opt.out_dir);
    describe(rep, sc);
    NewtonOptions nopt;
    nopt.tol = sc.integrator.newton_tol;
    nopt.max_iter = sc.integrator.newton_max_iter;
    const NetState st = steady_solve(sc.network, sc.scheme, sc.signals, 0.0, nopt);
    for (std::size_t k = 0; k < sc.network.pipes().size(); ++k) {
        const Pipe& pp = sc.network.pipes()[k];
        const PipeState& ps = st.pipes[k];
        rep.text << "pipe " << pp.id << ": p " << pa_to_bar(ps.p.front()) << " -> "
                 << pa_to_bar(ps.p.back()) << " bar, q " << ps.q.front() << " -> " << ps.q.back()
                 << " kg/s\n";
    }
    Trajectory snap;
    snap.times = {0.0};
    snap.states = {st};
    write_csv(snap, sc.network, rep.path(sc.name + "_steady.csv"));
    return rep.finish();
}

int cmd_bench(const Options& opt) {
    std::vector<std::string> names;
    std::stringstream ss(opt.schemes);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) names.push_back(tok);
    Scenario sc = load_scenario(opt);
    Report rep(opt.out_dir);
    describe(rep, sc);
    rep.text << "\nscheme   wall_s      steps    avg_newton_iters\n";
    for (const std::string& name : names) {
        Scenario run = sc;
        run.scheme.kind = scheme_kind_from(name);
        Trajectory traj;
        const RunStats st = timed_run(run, traj);
        char line[128];
        std::snprintf(line, sizeof line, "%-8s %-11.4g %-8ld %.2f\n", name.c_str(), st.wall_s,
                      st.steps, st.avg_newton);
        rep.text << line;
    }
    return rep.finish();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transient simulation of gas pipe networks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--case", opt.case_name, "built-in case name");
        cmd->add_option("--network", opt.network_path, "network JSON file (replaces the case's)");
        cmd->add_option("--scenario", opt.scenario_path, "scenario JSON file");
        cmd->add_option("--scheme", opt.scheme, "spatial scheme: new|mid|end");
        cmd->add_option("--cells", opt.cells, "override cells per pipe");
        cmd->add_option("--dt", opt.dt, "override time step [s]");
        cmd->add_option("--t-end", opt.t_end, "override end time [s]");
        cmd->add_option("--source", opt.source, "source quadrature: midpoint|simpson");
        cmd->add_option("--eig-sum", opt.eig_sum, "eigenvalue pairing: printed|derived");
        cmd->add_flag("--verbatim-source", opt.verbatim_source,
                      "pressure-averaged friction variant");
        cmd->add_option("--out", opt.out_dir, "output directory");
    };

    CLI::App* run = app.add_subcommand("run", "simulate one scenario");
    add_common(run);
    CLI::App* compare = app.add_subcommand("compare", "run several schemes on one scenario");
    add_common(compare);
    compare->add_option("--schemes", opt.schemes, "comma list of schemes");
    CLI::App* conv = app.add_subcommand("convergence", "refinement studies");
    add_common(conv);
    conv->add_option("--target", opt.target, "steady_residual|uniform_flow|traveling_wave");
    conv->add_option("--levels", opt.levels, "refinement levels");
    CLI::App* steady = app.add_subcommand("steady", "solve and report the steady state");
    add_common(steady);
    CLI::App* bench = app.add_subcommand("bench", "wall-time per scheme");
    add_common(bench);
    bench->add_option("--schemes", opt.schemes, "comma list of schemes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(run)) return cmd_run(opt);
        if (app.got_subcommand(compare)) return cmd_compare(opt);
        if (app.got_subcommand(conv)) return cmd_convergence(opt);
        if (app.got_subcommand(steady)) return cmd_steady(opt);
        return cmd_bench(opt);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
