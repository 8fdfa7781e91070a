// Acceptance gate: `acceptance <n>` runs check n (1..10), prints the measured
// numbers behind it, and ends with one "CRITERION n: PASS/FAIL - ..." line.
// Exit code 0 on pass, 1 on fail, 2 on usage errors. Tolerances are pinned
// here, next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "gasnet/analysis.hpp"
#include "gasnet/scenario_io.hpp"

using namespace gasnet;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// supply-end probe: cell index of the first pressure boundary's first end.
// The pressure there is pinned, so its mass flux carries the wave signature.
std::pair<int, int> supply_probe(const Network& net) {
    for (const Node& nd : net.nodes())
        if (nd.kind == NodeKind::pressure_boundary) {
            const PipeEnd e = net.ends_at(net.node_index(nd.id)).front();
            return {e.pipe, e.at_outlet ? net.grid(e.pipe).n : 0};
        }
    throw std::logic_error("network has no pressure boundary");
}

Network one_pipe(const PressureLaw& law, const PipeGeometry& geom, int cells) {
    std::vector<Node> nodes{{"in", NodeKind::pressure_boundary, {}},
                            {"out", NodeKind::flux_boundary, {}}};
    std::vector<Pipe> pipes{{"p1", "in", "out", geom, cells}};
    return Network(law, std::move(nodes), std::move(pipes));
}

bool criterion1() {
    constexpr double flux_tol = 1e-6;   // relative, every cell of the final state
    constexpr double outlet_tol = 5e-3; // 0.5% against the integrated profile
    constexpr double reference_outlet_bar = 153.8887; // documented benchmark value
    constexpr double flag_band_bar = 1.5;

    Scenario sc = builtin_case("pipe_steady");
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj = simulate(sc);
    const double wall = seconds_since(t0);

    const PipeState& ps = traj.states.back().pipes[0];
    double flux_dev = 0.0;
    for (double q : ps.q) flux_dev = std::max(flux_dev, std::abs(q - 150.0) / 150.0);

    const PipeGrid& grid = sc.network.grid(0);
    std::vector<double> xs;
    for (int i = 0; i <= grid.n; ++i) xs.push_back(grid.x(i));
    const std::vector<double> p_ode =
        continuous_steady_profile(sc.network.law(), sc.network.pipes()[0].geom, 150.0, 155.0e5, xs);
    const double outlet_bar = pa_to_bar(ps.p.back());
    const double oracle_bar = pa_to_bar(p_ode.back());
    const double outlet_rel = std::abs(outlet_bar - oracle_bar) / oracle_bar;
    const double dev_bar = outlet_bar - reference_outlet_bar;

    std::printf("  final flux: max relative deviation from 150 kg/s = %.3e (tol %.0e)\n",
                flux_dev, flux_tol);
    std::printf("  outlet pressure %.4f bar, integrated-profile oracle %.4f bar (rel %.3e, tol %.0e)\n",
                outlet_bar, oracle_bar, outlet_rel, outlet_tol);
    std::printf("  deviation from documented reference %.4f bar: %+.4f bar%s\n",
                reference_outlet_bar, dev_bar,
                std::abs(dev_bar) > flag_band_bar ? "  FLAG: outside +/-1.5 bar" : "");
    std::printf("  wall time %.2f s\n", wall);

    const bool pass = flux_dev <= flux_tol && outlet_rel <= outlet_tol;
    std::printf("CRITERION 1: %s - flux dev %.3e, outlet rel dev %.3e\n",
                pass ? "PASS" : "FAIL", flux_dev, outlet_rel);
    return pass;
}

bool criterion2() {
    constexpr double settle_tol = 1e-6; // the upwind run must be quiet
    constexpr double ratio_min = 10.0;  // others must wiggle at least 10x more

    const SchemeKind kinds[] = {SchemeKind::upwind, SchemeKind::midpoint, SchemeKind::endpoint};
    const char* names[] = {"new", "mid", "end"};
    double osc[3] = {0.0, 0.0, 0.0}; // final 20% of the window (the pinned metric)
    double dev[3] = {0.0, 0.0, 0.0}; // final spatial deviation from the exact flux
    for (int k = 0; k < 3; ++k) {
        Scenario sc = builtin_case("pipe_steady");
        sc.scheme.kind = kinds[k];
        const Trajectory traj = simulate(sc);
        const auto [pipe, cell] = supply_probe(sc.network);
        osc[k] = oscillation_metric(flux_series(traj, pipe, cell));
        for (double q : traj.states.back().pipes[0].q)
            dev[k] = std::max(dev[k], std::abs(q - 150.0));
        std::printf("  %s scheme: inlet-flux oscillation metric %.3e, final max|q-150| %.3e\n",
                    names[k], osc[k], dev[k]);
    }
    const bool pass =
        osc[0] <= settle_tol && osc[1] >= ratio_min * osc[0] && osc[2] >= ratio_min * osc[0];
    if (!pass && osc[1] <= osc[0] && osc[2] <= osc[0])
        std::printf("  note: under the damped fixed-step implicit integrator all three schemes\n"
                    "  converge to machine-exact steady fixpoints (temporally and spatially\n"
                    "  uniform flux) long before the measurement window opens, so no\n"
                    "  persistent-oscillation contrast exists to measure; exhibiting one\n"
                    "  requires a time integrator that does not damp marginal oscillatory\n"
                    "  modes, which the fixed-step design intentionally excludes.\n");
    std::printf("CRITERION 2: %s - new %.3e (tol %.0e), mid %.3e, end %.3e (factor %.0f)\n",
                pass ? "PASS" : "FAIL", osc[0], settle_tol, osc[1], osc[2], ratio_min);
    return pass;
}

bool criterion3() {
    constexpr double tol = 1e-12; // max relative drift over 200 explicit steps
    constexpr int n_steps = 200;
    constexpr double courant = 0.1; // fraction of the certified step bound

    const PressureLaw law = PressureLaw::isothermal(383.0735);
    const PipeGeometry geom = PipeGeometry::create(3000.0, 0.762, 0.0178);
    const Network net = one_pipe(law, geom, 60);
    const PipeGrid& grid = net.grid(0);

    // seed the second pressure from the integrated profile, then let the
    // recurrence generate the flux-row-cancelling discrete state
    const std::vector<double> seeds =
        continuous_steady_profile(law, geom, 100.0, 75.0e5, {0.0, grid.dx});
    const PipeState prof = discrete_steady_profile(grid, 100.0, seeds[0], seeds[1]);

    std::map<std::string, Signal> sigs{{"in", Signal::constant(prof.p[0], SignalUnit::pa)},
                                       {"out", Signal::constant(100.0, SignalUnit::kg_per_s)}};
    const DaeSystem dae(net, SchemeOptions{}, sigs);
    DaeWorkspace ws = dae.make_workspace();

    NetState ns;
    ns.pipes.push_back(prof);
    const Eigen::VectorXd u0 = dae.pack(ns);

    IntegratorConfig cfg;
    cfg.method = TimeMethod::explicit_euler;
    cfg.explicit_boundary = ExplicitBoundary::hold;
    cfg.dt = courant * cfg.cfl_safety * cfl_dt(net, ns);

    const auto t0 = std::chrono::steady_clock::now();
    Eigen::VectorXd u = u0;
    for (int k = 0; k < n_steps; ++k) u = step_explicit(dae, u, k * cfg.dt, cfg, ws);
    const double wall = seconds_since(t0);

    double worst = 0.0;
    for (int i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::abs(u[i] - u0[i]) / (std::abs(u0[i]) + 1.0));
    std::printf("  dt %.4f s (%.2f of the certified bound), %d steps, wall %.3f s\n",
                cfg.dt, courant, n_steps, wall);
    std::printf("  max relative state change %.3e (tol %.0e)\n", worst, tol);
    const bool pass = worst <= tol;
    std::printf("CRITERION 3: %s - max relative drift %.3e over %d explicit steps\n",
                pass ? "PASS" : "FAIL", worst, n_steps);
    return pass;
}

bool criterion4() {
    constexpr double mid_target = 1.0, mid_band = 0.3; // midpoint-source clause
    constexpr double simpson_min = 3.0;                // quadrature-upgrade clause

    // strong-friction configuration so the source term dominates the rows
    const PressureLaw law = PressureLaw::isothermal(100.0);
    const PipeGeometry geom = PipeGeometry::create(1000.0, 0.5, 2.0);
    const double C_q = 5.0, p_in = 2.0e5;
    const std::vector<int> ns{8, 16, 32, 64};

    std::vector<double> dxs, res_mid, res_simpson;
    for (int n : ns) {
        const PipeGrid grid = PipeGrid::create(geom, law, n);
        std::vector<double> xs;
        for (int i = 0; i <= n; ++i) xs.push_back(grid.x(i));
        const std::vector<double> p = continuous_steady_profile(law, geom, C_q, p_in, xs, 1e-12);
        PipeState s(n + 1);
        for (int i = 0; i <= n; ++i) {
            s.p[i] = p[i];
            s.q[i] = C_q;
        }
        SchemeOptions opts;
        opts.source = SourceQuadrature::midpoint;
        const double rm = steady_residual(grid, opts, s);
        opts.source = SourceQuadrature::simpson;
        const double rs = steady_residual(grid, opts, s);
        dxs.push_back(grid.dx);
        res_mid.push_back(rm);
        res_simpson.push_back(rs);
        std::printf("  n=%2d  dx=%7.3f  residual midpoint %.6e  simpson %.6e\n", n, grid.dx, rm,
                    rs);
    }
    const double slope_mid = loglog_slope(dxs, res_mid);
    const double slope_simpson = loglog_slope(dxs, res_simpson);
    const bool mid_ok = std::abs(slope_mid - mid_target) <= mid_band;
    const bool simpson_ok = slope_simpson >= simpson_min;
    std::printf("  midpoint-source slope %.3f (clause: within %.1f +/- %.1f) -> %s\n", slope_mid,
                mid_target, mid_band, mid_ok ? "ok" : "violated");
    std::printf("  simpson-source slope %.3f (clause: >= %.1f) -> %s\n", slope_simpson,
                simpson_min, simpson_ok ? "ok" : "violated");
    if (!mid_ok)
        std::printf("  note: on the exact steady profile the midpoint-source defect equals the\n"
                    "  midpoint-quadrature error of the friction integral, which is second order\n"
                    "  in dx; a slope near 1 is not attainable for this discretization.\n");
    const bool pass = mid_ok && simpson_ok;
    std::printf("CRITERION 4: %s - midpoint slope %.3f, simpson slope %.3f\n",
                pass ? "PASS" : "FAIL", slope_mid, slope_simpson);
    return pass;
}

bool criterion5() {
    constexpr double target = 1.0, band = 0.2; // implicit-Euler order
    const std::vector<double> dts{4.0, 2.0, 1.0};

    // spatially uniform decaying flow, exact for the semi-discrete system;
    // the pipe is long enough that the pinned boundaries stay causally
    // disconnected from the interior over the run, leaving pure time error
    const PressureLaw law = PressureLaw::isothermal(10.0);
    const PipeGeometry geom = PipeGeometry::create(10000.0, 0.1, 0.002, 1.0); // a = 1
    const double rho0 = 1.0, c0 = 1.0, t_end = 100.0;

    auto linf_error = [&](double dt) {
        Scenario sc(one_pipe(law, geom, 16));
        sc.signals.emplace("in", Signal::constant(law.p_of_rho(rho0), SignalUnit::pa));
        Signal out;
        out.interp = SignalInterp::linear;
        out.unit = SignalUnit::kg_per_s;
        for (int k = 0; k <= 100; ++k) { // breakpoints on every tested step grid
            double rho = 0.0, q = 0.0;
            uniform_flow_reference(rho0, c0, geom, static_cast<double>(k), rho, q);
            out.points.emplace_back(static_cast<double>(k), q);
        }
        sc.signals.emplace("out", std::move(out));
        sc.t_end = t_end;
        sc.output_dt = t_end;
        sc.init = InitSpec::uniform(law.p_of_rho(rho0), 1.0 / c0);
        sc.integrator.dt = dt;
        sc.integrator.newton_tol = 1e-12;
        const Trajectory traj = simulate(sc);

        double rho = 0.0, q = 0.0;
        uniform_flow_reference(rho0, c0, geom, t_end, rho, q);
        const double p_ref = law.p_of_rho(rho);
        const PipeState& ps = traj.states.back().pipes[0];
        double err = 0.0;
        for (std::size_t i = 0; i < ps.p.size(); ++i) {
            err = std::max(err, std::abs(ps.p[i] - p_ref) / p_ref);
            err = std::max(err, std::abs(ps.q[i] - q) / std::abs(q));
        }
        return err;
    };

    std::vector<double> errs;
    for (double dt : dts) {
        errs.push_back(linf_error(dt));
        std::printf("  dt=%.1f s  Linf relative error %.6e\n", dts[errs.size() - 1],
                    errs.back());
    }
    const double slope = loglog_slope(dts, errs);
    const bool pass = std::abs(slope - target) <= band;
    std::printf("CRITERION 5: %s - implicit-Euler error slope %.3f (target %.1f +/- %.1f)\n",
                pass ? "PASS" : "FAIL", slope, target, band);
    return pass;
}

bool criterion6() {
    constexpr double tol = 1e-6;
    constexpr double C = 0.5, y0 = 0.6, s_span = 2.0, dx = 1e-3;
    const auto t0 = std::chrono::steady_clock::now();
    const double residual = traveling_wave_mass_residual(C, y0, s_span, dx);
    std::printf("  wave speed %.2f, seed %.2f, window %.1f, dx %.0e: mass residual %.3e"
                " (tol %.0e), wall %.2f s\n",
                C, y0, s_span, dx, residual, tol, seconds_since(t0));
    const bool pass = residual <= tol;
    std::printf("CRITERION 6: %s - traveling-wave mass-conservation residual %.3e\n",
                pass ? "PASS" : "FAIL", residual);
    return pass;
}

bool criterion7() {
    constexpr double tol = 1e-9; // scaled per-step algebraic residual
    bool pass = true;
    double overall = 0.0;
    for (const char* name : {"diamond_step", "tree46_step"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const Trajectory traj = simulate(builtin_case(name));
        const double wall = seconds_since(t0);
        double rmax = 0.0;
        for (const StepDiag& d : traj.steps) rmax = std::max(rmax, d.constraint_residual);
        std::printf("  %s: %zu steps, max scaled junction/boundary residual %.3e, wall %.2f s\n",
                    name, traj.steps.size(), rmax, wall);
        overall = std::max(overall, rmax);
        pass = pass && rmax <= tol;
    }
    std::printf("CRITERION 7: %s - worst scaled constraint residual %.3e (tol %.0e)\n",
                pass ? "PASS" : "FAIL", overall, tol);
    return pass;
}

bool criterion8() {
    // wall-clock ordering across schemes on the long slow-transient case;
    // best-of-N beats scheduler noise (the per-step assembly cost gaps are
    // a few percent under a fixed-step integrator)
    constexpr int rounds = 9;
    constexpr double noise = 0.02; // timer noise allowance on the comparisons
    const SchemeKind kinds[] = {SchemeKind::upwind, SchemeKind::endpoint, SchemeKind::midpoint};
    const char* names[] = {"new", "end", "mid"};

    { // warmup pass so the first measured run pays no one-time costs
        Scenario sc = builtin_case("pipe_wave");
        sc.t_end = 600.0;
        simulate(sc);
    }

    // round-robin so clock drift during the measurement hits every scheme alike
    double wall[3] = {1e30, 1e30, 1e30};
    long iters[3] = {0, 0, 0};
    std::size_t steps = 0;
    for (int round = 0; round < rounds; ++round)
        for (int k = 0; k < 3; ++k) {
            Scenario sc = builtin_case("pipe_wave");
            sc.scheme.kind = kinds[k];
            const auto t0 = std::chrono::steady_clock::now();
            const Trajectory traj = simulate(sc);
            wall[k] = std::min(wall[k], seconds_since(t0));
            if (round == 0) {
                steps = traj.steps.size();
                for (const StepDiag& d : traj.steps) iters[k] += d.newton_iters;
            }
        }
    for (int k = 0; k < 3; ++k)
        std::printf("  %s scheme: best of %d walls %.4f s (%zu steps, %ld solver iterations)\n",
                    names[k], rounds, wall[k], steps, iters[k]);

    // "new <= end" tolerates a tie up to timer noise; "end < mid" must hold
    // by more than the noise allowance
    const bool pass =
        wall[0] <= wall[1] * (1.0 + noise) && wall[1] * (1.0 + noise) < wall[2];
    std::printf("CRITERION 8: %s - new %.4f s <= end %.4f s < mid %.4f s expected"
                " (%.0f%% noise allowance)\n",
                pass ? "PASS" : "FAIL", wall[0], wall[1], wall[2], noise * 100.0);
    return pass;
}

bool criterion9() {
    constexpr double growth_min = 10.0;
    constexpr int max_steps = 1000;

    const Network net = one_pipe(PressureLaw::isothermal(383.0735),
                                 PipeGeometry::create(3000.0, 0.762, 0.0178), 60);
    std::map<std::string, Signal> sigs{{"in", Signal::constant(60.0e5, SignalUnit::pa)},
                                       {"out", Signal::constant(20.0, SignalUnit::kg_per_s)}};
    const DaeSystem dae(net, SchemeOptions{}, sigs);
    DaeWorkspace ws = dae.make_workspace();
    const Eigen::VectorXd base = dae.uniform_state(60.0e5, 20.0);
    const double bound = cfl_dt(net, dae.unpack(base));

    IntegratorConfig cfg;
    cfg.method = TimeMethod::explicit_euler;
    cfg.cfl_safety = 1.0;
    cfg.dt = 1.05 * bound;

    bool rejected = false;
    try {
        step_explicit(dae, base, 0.0, cfg, ws);
    } catch (const CflViolation& e) {
        rejected = true;
        std::printf("  dt %.4f s above bound %.4f s rejected as required\n", e.dt, e.dt_max);
    }
    if (!rejected) std::printf("  dt %.4f s was NOT rejected\n", cfg.dt);

    // guard disabled at 1.5x the bound: a seeded perturbation must grow.
    // The gap is measured per component relative to the base state's scale so
    // that flux-seeded pressure differences do not masquerade as growth.
    cfg.dt = 1.5 * bound;
    DaeWorkspace ws2 = dae.make_workspace();
    Eigen::VectorXd a = base;
    Eigen::VectorXd b = base;
    b[dae.col_q(0, 30)] += 1e-6 * 20.0;
    const Eigen::VectorXd scale = base.cwiseAbs().array() + 1.0;
    auto gap = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return ((x - y).cwiseAbs().cwiseQuotient(scale)).maxCoeff();
    };
    const double gap0 = gap(a, b);

    double ratio = 0.0;
    bool grew = false;
    int steps = 0;
    for (int k = 0; k < max_steps && !grew; ++k) {
        try {
            a = step_explicit(dae, a, k * cfg.dt, cfg, ws, /*enforce_cfl=*/false);
            b = step_explicit(dae, b, k * cfg.dt, cfg, ws2, /*enforce_cfl=*/false);
        } catch (const std::domain_error&) {
            grew = true; // left the admissible set: growth beyond any bound
            ratio = std::numeric_limits<double>::infinity();
            ++steps;
            break;
        }
        ++steps;
        ratio = gap(a, b) / gap0;
        if (ratio > growth_min) grew = true;
    }
    std::printf("  perturbation growth factor %.1f after %d steps at 1.5x the bound\n", ratio,
                steps);
    const bool pass = rejected && grew;
    std::printf("CRITERION 9: %s - rejection %s, growth factor %.1f within %d steps\n",
                pass ? "PASS" : "FAIL", rejected ? "ok" : "missing", ratio, steps);
    return pass;
}

bool criterion10() {
    constexpr double riemann_tol = 1e-10;
    constexpr double eig_tol = 1e-5;
    constexpr double inverse_tol = 1e-12;
    constexpr int n_states = 1000;

    const PressureLaw laws[] = {PressureLaw::isothermal(383.0735),
                                PressureLaw::affine(383.0735, -2.0e-9)};
    const char* law_names[] = {"isothermal", "affine"};
    const PipeGeometry geom = PipeGeometry::create(1000.0, 0.6, 0.02);
    bool pass = true;

    std::mt19937 rng(987654321u);
    std::uniform_real_distribution<double> rho_dist(0.05, 400.0);
    std::uniform_real_distribution<double> q_dist(-500.0, 500.0);
    for (int l = 0; l < 2; ++l) {
        const PressureLaw& law = laws[l];
        double worst_rt = 0.0, worst_eig = 0.0, worst_inv = 0.0;
        for (int k = 0; k < n_states; ++k) {
            const double rho = rho_dist(rng);
            const double q = q_dist(rng);
            const RiemannPair w = to_riemann(law, geom, rho, q);
            double rho_back = 0.0, q_back = 0.0;
            from_riemann(law, geom, w, rho_back, q_back);
            worst_rt = std::max(worst_rt, std::abs(rho_back - rho) / rho);
            worst_rt = std::max(worst_rt, std::abs(q_back - q) / (1.0 + std::abs(q)));

            const double h = 1e-6 * rho;
            const double fd = (law.p_of_rho(rho + h) - law.p_of_rho(rho - h)) / (2.0 * h);
            const double lam2 = law.lambda_of_rho(rho) * law.lambda_of_rho(rho);
            worst_eig = std::max(worst_eig, std::abs(lam2 - fd) / fd);

            worst_inv = std::max(worst_inv,
                                 std::abs(law.rho_of_p(law.p_of_rho(rho)) - rho) / rho);
            worst_inv = std::max(
                worst_inv,
                std::abs(law.invariant_integral_inv(law.invariant_integral(rho)) - rho) / rho);
        }
        std::printf("  %s: riemann round trip %.3e (tol %.0e), eigenvalue vs FD %.3e (tol %.0e),"
                    " inverses %.3e (tol %.0e)\n",
                    law_names[l], worst_rt, riemann_tol, worst_eig, eig_tol, worst_inv,
                    inverse_tol);
        pass = pass && worst_rt <= riemann_tol && worst_eig <= eig_tol && worst_inv <= inverse_tol;
    }

    // row accounting: every builtin assembles with one equation per unknown
    // and one boundary row per attached pipe end
    for (const char* name :
         {"pipe_step", "pipe_wave", "pipe_steady", "diamond_step", "tree46_step"}) {
        const Scenario sc = builtin_case(name);
        const DaeSystem dae(sc.network, sc.scheme, sc.signals);
        int expected_size = 0;
        for (const auto& g : sc.network.grids()) expected_size += 2 * g.points();
        int degree_sum = 0;
        for (std::size_t v = 0; v < sc.network.nodes().size(); ++v)
            degree_sum += sc.network.degree(static_cast<int>(v));
        const bool ok = dae.size() == expected_size &&
                        dae.n_algebraic() == 2 * static_cast<int>(sc.network.pipes().size()) &&
                        dae.n_algebraic() == degree_sum &&
                        dae.n_differential() == dae.size() - dae.n_algebraic() &&
                        dae.row_structure().size() == static_cast<std::size_t>(dae.size());
        std::printf("  %s: %d unknowns, %d boundary rows, %d scheme rows -> %s\n", name,
                    dae.size(), dae.n_algebraic(), dae.n_differential(),
                    ok ? "consistent" : "INCONSISTENT");
        pass = pass && ok;
    }

    std::printf("CRITERION 10: %s - state conversions and row accounting\n",
                pass ? "PASS" : "FAIL");
    return pass;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
        return 2;
    }
    const int k = std::atoi(argv[1]);
    bool pass = false;
    try {
        switch (k) {
        case 1: pass = criterion1(); break;
        case 2: pass = criterion2(); break;
        case 3: pass = criterion3(); break;
        case 4: pass = criterion4(); break;
        case 5: pass = criterion5(); break;
        case 6: pass = criterion6(); break;
        case 7: pass = criterion7(); break;
        case 8: pass = criterion8(); break;
        case 9: pass = criterion9(); break;
        case 10: pass = criterion10(); break;
        default:
            std::fprintf(stderr, "usage: acceptance <criterion 1..10>\n");
            return 2;
        }
    } catch (const std::exception& e) {
        std::printf("CRITERION %d: FAIL - unexpected error: %s\n", k, e.what());
        return 1;
    }
    return pass ? 0 : 1;
}
