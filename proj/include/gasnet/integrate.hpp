#pragma once

// Time integration of the assembled DAE.
//
// Implicit methods (implicit Euler, BDF2) run a chord Newton iteration per
// step: the iteration matrix is built by colored finite differences at the
// step predictor and its factorization is reused across steps while the
// iteration stays fast and dt is unchanged. Explicit Euler applies only to
// ODE-reducible systems (one pipe whose boundary rows are direct value pins)
// and enforces the CFL bound.

#include <utility>
#include <vector>

#include "gasnet/dae.hpp"
#include "gasnet/newton.hpp"
#include "gasnet/scenario.hpp"

namespace gasnet {

struct StepDiag {
    double t = 0.0;  // time reached by the step
    double dt = 0.0; // step size used
    int newton_iters = 0;
    double constraint_residual = 0.0; // scaled algebraic residual after the step
};

struct Trajectory {
    std::vector<double> times;    // snapshot times, strictly increasing
    std::vector<NetState> states; // one snapshot per time
    std::vector<StepDiag> steps;  // one entry per accepted step
};

/// Steady state at time t0: solves F(u,t0) = 0 and A(u,t0) = 0 (all time
/// derivatives zero) by damped Newton from the uniform anchor-pressure,
/// zero-flux guess.
inline NetState steady_solve(const DaeSystem& dae, double t0, const NewtonOptions& opt = {}) {
    DaeWorkspace ws = dae.make_workspace();
    std::vector<GlobalRow> rows;
    auto residual = [&](const Eigen::VectorXd& u, Eigen::VectorXd& out) {
        dae.eval(u, t0, ws, rows);
        out.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
            out[static_cast<Eigen::Index>(r)] = rows[r].value;
    };
    Eigen::VectorXd u0 = dae.uniform_state(dae.anchor_pressure(t0), 0.0);
    NewtonResult res = newton_solve(residual, std::move(u0), dae.row_structure(), opt);
    return dae.unpack(res.u);
}

inline NetState steady_solve(const Network& net, const SchemeOptions& scheme,
                             const std::map<std::string, Signal>& signals, double t0,
                             const NewtonOptions& opt = {}) {
    return steady_solve(DaeSystem(net, scheme, signals), t0, opt);
}

/// One-step implicit solver with chord-Newton factorization reuse.
class ImplicitStepper {
public:
    ImplicitStepper(const DaeSystem& dae, const IntegratorConfig& cfg)
        : dae_(&dae), cfg_(cfg), plan_(JacobianPlan::create(dae.row_structure())),
          ws_(dae.make_workspace()), n_(dae.size()) {
        wopt_.tol = cfg.newton_tol;
        wopt_.max_iter = cfg.newton_max_iter;
    }

    /// Implicit Euler:  E(u)(u - u_k) = dt F(u, t_k + dt),  A(u, t_k + dt) = 0.
    Eigen::VectorXd step_ie(const Eigen::VectorXd& u_k, double t_k, double dt, int& iters) {
        c0_ = 1.0;
        hist_ = u_k;
        t_new_ = t_k + dt;
        return solve(u_k, dt, iters);
    }

    /// BDF2 with equal steps:  E(u)(1.5 u - 2 u_k + 0.5 u_km1) = dt F(u, t_k + dt).
    Eigen::VectorXd step_bdf2(const Eigen::VectorXd& u_k, const Eigen::VectorXd& u_km1, double t_k,
                              double dt, int& iters) {
        c0_ = 1.5;
        hist_ = 2.0 * u_k - 0.5 * u_km1;
        t_new_ = t_k + dt;
        Eigen::VectorXd pred = 2.0 * u_k - u_km1; // linear extrapolation
        Eigen::VectorXd probe(n_);
        try {
            residual(pred, probe);
        } catch (const std::domain_error&) {
            pred = u_k;
        }
        return solve(std::move(pred), dt, iters);
    }

    void invalidate() { lu_valid_ = false; }

private:
    void residual(const Eigen::VectorXd& u, Eigen::VectorXd& out) {
        dae_->eval(u, t_new_, ws_, rows_);
        out.resize(n_);
        for (int r = 0; r < n_; ++r) {
            const GlobalRow& gr = rows_[r];
            if (gr.differential) {
                double acc = -dt_ * gr.value;
                for (int j = 0; j < gr.mass_n; ++j)
                    acc += gr.mass_val[j] * (c0_ * u[gr.mass_col[j]] - hist_[gr.mass_col[j]]);
                out[r] = acc;
            } else {
                out[r] = gr.value;
            }
        }
    }

    void rebuild(const Eigen::VectorXd& u, Eigen::VectorXd& r_at_u) {
        auto fn = [this](const Eigen::VectorXd& v, Eigen::VectorXd& out) { residual(v, out); };
        fd_jacobian(fn, u, r_at_u, plan_, J_);
        lu_.compute(J_);
        lu_valid_ = true;
        lu_dt_ = dt_;
    }

    Eigen::VectorXd solve(Eigen::VectorXd u, double dt, int& iters_out) {
        dt_ = dt;
        Eigen::VectorXd r(n_), r_new(n_), du(n_), u_new(n_);
        try {
            residual(u, r);
        } catch (const std::domain_error&) {
            invalidate();
            throw NewtonDiverged("implicit step: inadmissible predictor state");
        }
        if (!lu_valid_ || dt != lu_dt_) rebuild(u, r);

        bool refreshed = false;
        const int stall = std::max(6, cfg_.newton_max_iter / 4);
        for (int it = 1; it <= cfg_.newton_max_iter; ++it) {
            iters_out = it;
            du = lu_.solve(-r);
            if (!du.allFinite()) {
                invalidate();
                throw NewtonDiverged("implicit step: singular iteration matrix");
            }
            double alpha = 1.0;
            bool admissible = false;
            for (int bt = 0; bt < 30; ++bt) {
                u_new = u + alpha * du;
                try {
                    residual(u_new, r_new);
                    admissible = true;
                    break;
                } catch (const std::domain_error&) {
                    alpha *= 0.5;
                }
            }
            if (!admissible) {
                invalidate();
                throw NewtonDiverged("implicit step: no admissible iterate");
            }
            u.swap(u_new);
            r.swap(r_new);
            if (alpha == 1.0 && detail::wrms(du, u, wopt_) <= 1.0) {
                if (it > 3) invalidate(); // slow step: refresh before the next one
                return u;
            }
            if (!refreshed && it >= stall) { // stale factorization suspected
                rebuild(u, r);
                refreshed = true;
            }
        }
        invalidate();
        throw NewtonDiverged("implicit step: Newton did not converge");
    }

    const DaeSystem* dae_;
    IntegratorConfig cfg_;
    NewtonOptions wopt_;
    JacobianPlan plan_;
    DaeWorkspace ws_;
    std::vector<GlobalRow> rows_;
    int n_;
    double c0_ = 1.0, dt_ = 0.0, t_new_ = 0.0;
    Eigen::VectorXd hist_;
    Eigen::MatrixXd J_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    bool lu_valid_ = false;
    double lu_dt_ = -1.0;
};

/// Single implicit Euler step (fresh factorization).
inline Eigen::VectorXd step_implicit(const DaeSystem& dae, const Eigen::VectorXd& u_k, double t_k,
                                     double dt, const IntegratorConfig& cfg) {
    ImplicitStepper stepper(dae, cfg);
    int iters = 0;
    return stepper.step_ie(u_k, t_k, dt, iters);
}

/// Forward-Euler step for ODE-reducible systems (single pipe, value pins,
/// upwind scheme). Differential rows advance explicitly with the right-hand
/// side at t_k; pinned columns take their signal value at t_k + dt; each
/// characteristic closure row is solved for its remaining endpoint column
/// (or, with ExplicitBoundary::hold, that column is kept at its old value).
/// Rejects dt above cfl_safety * cfl_dt unless enforce_cfl is false.
inline Eigen::VectorXd step_explicit(const DaeSystem& dae, const Eigen::VectorXd& u_k, double t_k,
                                     const IntegratorConfig& cfg, DaeWorkspace& ws,
                                     bool enforce_cfl = true) {
    if (!dae.explicit_reducible())
        throw std::invalid_argument("step_explicit: needs a single pipe with value-pinned ends");
    if (dae.options().kind != SchemeKind::upwind)
        throw std::invalid_argument("step_explicit: only the upwind scheme reduces to an ODE");
    const double dt = cfg.dt;
    const NetState s = dae.unpack(u_k);
    const double bound = cfg.cfl_safety * cfl_dt(dae.network().grid(0), s.pipes[0]);
    if (enforce_cfl && dt > bound * (1.0 + 1e-12)) throw CflViolation(dt, bound);

    std::vector<GlobalRow> rows;
    dae.eval(u_k, t_k, ws, rows);
    const int n = dae.size();
    Eigen::VectorXd u = u_k;

    std::vector<char> pinned(n, 0);
    std::vector<double> pin_val(n, 0.0);
    for (const ValuePin& pin : dae.value_pins()) {
        pinned[pin.col] = 1;
        pin_val[pin.col] = pin.scale * dae.node_signal(pin.node).eval(t_k + dt);
    }

    for (int r = 0; r < n; ++r) { // interior rows: plain forward Euler
        const GlobalRow& gr = rows[r];
        if (gr.differential && gr.mass_n == 1)
            u[gr.mass_col[0]] += dt * gr.value / gr.mass_val[0];
    }
    for (int r = 0; r < n; ++r) { // closure rows: one pinned, one free column
        const GlobalRow& gr = rows[r];
        if (!gr.differential || gr.mass_n != 2) continue;
        const int ip = pinned[gr.mass_col[0]] ? 0 : 1;
        const int io = 1 - ip;
        if (!pinned[gr.mass_col[ip]] || pinned[gr.mass_col[io]])
            throw std::logic_error("step_explicit: closure row does not pair with one pin");
        if (cfg.explicit_boundary == ExplicitBoundary::hold) continue;
        const double d_pin = pin_val[gr.mass_col[ip]] - u_k[gr.mass_col[ip]];
        u[gr.mass_col[io]] =
            u_k[gr.mass_col[io]] + (dt * gr.value - gr.mass_val[ip] * d_pin) / gr.mass_val[io];
    }
    for (int c = 0; c < n; ++c)
        if (pinned[c]) u[c] = pin_val[c];
    return u;
}

/// Full scenario run: initializes per policy, advances to t_end with the
/// configured method, snapshots at the output cadence (plus t_end), and on
/// Newton divergence halves dt and retries, restoring it gradually; aborts
/// once dt falls below dt_min.
inline Trajectory simulate(const Scenario& sc) {
    sc.integrator.validate();
    if (!(sc.t_end >= 0.0)) throw std::invalid_argument("simulate: t_end must be >= 0");
    if (!(sc.output_dt > 0.0)) throw std::invalid_argument("simulate: output_dt must be positive");

    DaeSystem dae(sc.network, sc.scheme, sc.signals);
    DaeWorkspace ws = dae.make_workspace();
    NewtonOptions nopt;
    nopt.tol = sc.integrator.newton_tol;
    nopt.max_iter = sc.integrator.newton_max_iter;

    Eigen::VectorXd u = sc.init.policy == InitPolicy::steady
                            ? dae.pack(steady_solve(dae, 0.0, nopt))
                            : dae.uniform_state(sc.init.p, sc.init.q);

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(dae.unpack(u));
    if (sc.t_end == 0.0) return traj;

    std::vector<double> samples;
    for (int k = 1; k * sc.output_dt < sc.t_end * (1.0 - 1e-12); ++k)
        samples.push_back(k * sc.output_dt);
    samples.push_back(sc.t_end);

    ImplicitStepper stepper(dae, sc.integrator);
    const bool explicit_run = sc.integrator.method == TimeMethod::explicit_euler;
    const bool bdf2 = sc.integrator.method == TimeMethod::bdf2;
    IntegratorConfig ecfg = sc.integrator;

    double t = 0.0;
    double dt_cur = sc.integrator.dt;
    Eigen::VectorXd u_prev;
    double hist_dt = -1.0; // dt behind (u, u_prev); BDF2 needs it to match
    std::size_t next = 0;

    while (next < samples.size()) {
        const double dt_step = std::min(dt_cur, samples[next] - t);
        Eigen::VectorXd u_new;
        int iters = 0;
        if (explicit_run) {
            ecfg.dt = dt_step;
            u_new = step_explicit(dae, u, t, ecfg, ws);
        } else {
            try {
                if (bdf2 && hist_dt == dt_step)
                    u_new = stepper.step_bdf2(u, u_prev, t, dt_step, iters);
                else
                    u_new = stepper.step_ie(u, t, dt_step, iters);
            } catch (const NewtonDiverged&) {
                dt_cur *= 0.5;
                hist_dt = -1.0;
                if (dt_cur < sc.integrator.dt_min)
                    throw NewtonDiverged("simulate: dt fell below dt_min at t=" +
                                         std::to_string(t));
                continue;
            }
        }
        if (bdf2) {
            u_prev = u;
            hist_dt = dt_step;
        }
        u = std::move(u_new);
        t += dt_step;
        traj.steps.push_back({t, dt_step, iters, dae.constraint_residual(u, t, ws)});
        if (t >= samples[next] - 1e-9 * std::max(1.0, dt_step)) {
            t = samples[next]; // snap accumulated time to the sample grid
            traj.times.push_back(t);
            traj.states.push_back(dae.unpack(u));
            ++next;
        }
        if (!explicit_run && dt_cur < sc.integrator.dt)
            dt_cur = std::min(sc.integrator.dt, dt_cur * 1.5); // gradual recovery
    }
    return traj;
}

} // namespace gasnet
