#pragma once

// Newton infrastructure for the assembled DAE: finite-difference Jacobians
// compressed by structural column coloring, and a damped full-Newton solve
// used for steady states. Time steppers in integrate.hpp run their own chord
// iteration on top of fd_jacobian so they can reuse factorizations.

#include <vector>

#include <Eigen/Dense>

#include "gasnet/common.hpp"

namespace gasnet {

struct NewtonOptions {
    double tol = 1e-10;  // relative increment tolerance (WRMS <= 1 stops)
    double atol = 1e-10; // absolute increment floor in the WRMS weights
    int max_iter = 50;
    bool line_search = true;
};

/// Column grouping for compressed finite-difference Jacobians: two columns
/// share a group only if no row depends on both, so one residual evaluation
/// per group recovers every J(r,c) unambiguously.
struct JacobianPlan {
    std::vector<std::vector<int>> col_rows; // rows that structurally depend on a column
    std::vector<std::vector<int>> groups;   // columns per color

    static JacobianPlan create(const std::vector<std::vector<int>>& row_cols) {
        const int n = static_cast<int>(row_cols.size());
        JacobianPlan plan;
        plan.col_rows.resize(n);
        for (int r = 0; r < n; ++r)
            for (int c : row_cols[r]) plan.col_rows[c].push_back(r);

        // greedy coloring on the column-conflict graph (conflict: co-occur in a row)
        std::vector<int> color(n, -1);
        std::vector<char> used; // colors blocked for the current column
        int n_colors = 0;
        for (int c = 0; c < n; ++c) {
            used.assign(n_colors + 1, 0);
            for (int r : plan.col_rows[c])
                for (int other : row_cols[r])
                    if (color[other] >= 0) used[color[other]] = 1;
            int pick = 0;
            while (used[pick]) ++pick;
            color[c] = pick;
            n_colors = std::max(n_colors, pick + 1);
        }
        plan.groups.resize(n_colors);
        for (int c = 0; c < n; ++c) plan.groups[color[c]].push_back(c);
        return plan;
    }
};

/// Dense Jacobian of R at u by forward differences, one evaluation per color
/// group; r0 = R(u). Perturbations are relative (1e-7 scale); a perturbation
/// that drives the state inadmissible is flipped in sign, then shrunk.
template <class Residual>
void fd_jacobian(Residual&& R, const Eigen::VectorXd& u, const Eigen::VectorXd& r0,
                 const JacobianPlan& plan, Eigen::MatrixXd& J) {
    const int n = static_cast<int>(u.size());
    J.setZero(n, n);
    Eigen::VectorXd up(n), rp(n);
    std::vector<double> h(n, 0.0);
    for (const auto& group : plan.groups) {
        double scale = 1.0;
        bool flipped = false;
        for (int attempt = 0;; ++attempt) {
            up = u;
            for (int c : group) {
                h[c] = 1e-7 * (std::abs(u[c]) + 1.0) * scale * (flipped ? -1.0 : 1.0);
                up[c] += h[c];
            }
            try {
                R(up, rp);
                break;
            } catch (const std::domain_error&) {
                if (!flipped) {
                    flipped = true;
                } else {
                    flipped = false;
                    scale *= 0.5;
                }
                if (attempt >= 60) throw;
            }
        }
        for (int c : group)
            for (int r : plan.col_rows[c]) J(r, c) = (rp[r] - r0[r]) / h[c];
    }
}

struct NewtonResult {
    Eigen::VectorXd u;
    int iters = 0;
};

namespace detail {

inline double wrms(const Eigen::VectorXd& step, const Eigen::VectorXd& u,
                   const NewtonOptions& opt) {
    double sum = 0.0;
    for (int j = 0; j < step.size(); ++j) {
        const double w = opt.tol * std::abs(u[j]) + opt.atol;
        sum += sq(step[j] / w);
    }
    return std::sqrt(sum / static_cast<double>(step.size()));
}

} // namespace detail

/// Damped full Newton on R(u) = 0 with a fresh finite-difference Jacobian
/// each iteration and backtracking on the residual 2-norm. Throws
/// NewtonDiverged when out of iterations or when no damping helps.
template <class Residual>
NewtonResult newton_solve(Residual&& R, Eigen::VectorXd u,
                          const std::vector<std::vector<int>>& structure,
                          const NewtonOptions& opt = {}) {
    const JacobianPlan plan = JacobianPlan::create(structure);
    const int n = static_cast<int>(u.size());
    Eigen::VectorXd r(n), r_trial(n), u_trial(n), step(n);
    Eigen::MatrixXd J(n, n);
    R(u, r);

    for (int iter = 1; iter <= opt.max_iter; ++iter) {
        fd_jacobian(R, u, r, plan, J);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        step = lu.solve(-r);
        if (!step.allFinite()) throw NewtonDiverged("newton_solve: singular Jacobian");

        double alpha = 1.0;
        const double res0 = r.norm();
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            u_trial = u + alpha * step;
            try {
                R(u_trial, r_trial);
            } catch (const std::domain_error&) {
                alpha *= 0.5;
                continue;
            }
            if (!opt.line_search || r_trial.norm() <= (1.0 - 1e-4 * alpha) * res0 ||
                detail::wrms(alpha * step, u, opt) <= 1.0) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) throw NewtonDiverged("newton_solve: line search failed");
        u = u_trial;
        r = r_trial;
        if (alpha == 1.0 && detail::wrms(step, u, opt) <= 1.0) return {std::move(u), iter};
    }
    throw NewtonDiverged("newton_solve: no convergence within max_iter");
}

} // namespace gasnet
