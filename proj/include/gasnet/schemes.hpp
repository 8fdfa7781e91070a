#pragma once

// Semi-discrete spatial schemes on a single pipe. Each scheme emits one row
// per unknown slot (p_i, q_i interleaved per grid point); endpoint slots that
// a boundary or coupling condition must close are emitted as algebraic
// placeholders so that a network assembly can fill them 1:1.
//
// upwind ("new"):  central interior rows in conservative variables plus
//                  characteristic closure rows at both pipe ends,
//   dp_i/dt = -lambda_i^2 / (2 dx a) (q_{i+1} - q_{i-1})
//   dq_i/dt = -(lambda_i a / 4 dx) (rho_{i+1} - rho_{i-1}) Lambda_i + a S_i
//   with Lambda_i the eigenvalue sum factor and S_i a weighted friction
//   source; closures combine dq/a +- dp/lambda with one-sided differences.
// midpoint:        cell-pair averaged rows, no closure rows.
// endpoint:        one-sided rows, no closure rows.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gasnet/grid.hpp"

namespace gasnet {

enum class SchemeKind { upwind, midpoint, endpoint };
enum class SourceQuadrature { midpoint, simpson };
enum class EigenvalueSum { printed, derived };

struct SchemeOptions {
    SchemeKind kind = SchemeKind::upwind;
    SourceQuadrature source = SourceQuadrature::midpoint;
    EigenvalueSum eig_sum = EigenvalueSum::printed;
    // Reproduce the midpoint/endpoint sources with pressure where the
    // consistent form has density (they differ by the factor z(p)).
    bool verbatim_source = false;
};

/// Local slot index of p_i / q_i within a pipe block.
inline int slot_p(int i) { return 2 * i; }
inline int slot_q(int i) { return 2 * i + 1; }

/// One emitted row, aligned with its unknown slot. Algebraic placeholders
/// (differential = false) carry no content; assembly replaces them.
struct LocalRow {
    bool differential = false;
    int mass_n = 0;
    int mass_col[2] = {-1, -1};
    double mass_val[2] = {0.0, 0.0};
    double rhs = 0.0;
};

/// Row evaluations plus reusable scratch buffers.
struct PipeRows {
    std::vector<LocalRow> rows;
    std::vector<double> rho, lam, fric;
};

/// Structural dependency set of a row (includes mass columns).
struct RowStencil {
    bool differential = false;
    std::vector<int> cols;
};

/// Quadrature weights for the interior friction source over the
/// (i-1, i, i+1) stencil: midpoint keeps the paper scheme's basic form,
/// Simpson upgrades the steady-state consistency order.
inline std::array<double, 3> source_weights(SourceQuadrature q) {
    if (q == SourceQuadrature::midpoint) return {0.0, 1.0, 0.0};
    return {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
}

namespace detail {

inline void prepare_fields(const PipeGrid& grid, const PipeState& s, PipeRows& out) {
    require_match(grid, s);
    const int m = grid.points();
    out.rows.assign(m * 2, LocalRow{});
    out.rho.resize(m);
    out.lam.resize(m);
    out.fric.resize(m);
    for (int i = 0; i < m; ++i) {
        out.rho[i] = grid.law.rho_of_p(s.p[i]);
        out.lam[i] = grid.law.lambda_of_rho(out.rho[i]);
        out.fric[i] = friction_source(grid.geom, out.rho[i], s.q[i]);
    }
}

inline LocalRow diff_row1(int col, double coeff, double rhs) {
    LocalRow r;
    r.differential = true;
    r.mass_n = 1;
    r.mass_col[0] = col;
    r.mass_val[0] = coeff;
    r.rhs = rhs;
    return r;
}

inline LocalRow diff_row2(int col0, double c0, int col1, double c1, double rhs) {
    LocalRow r;
    r.differential = true;
    r.mass_n = 2;
    r.mass_col[0] = col0;
    r.mass_val[0] = c0;
    r.mass_col[1] = col1;
    r.mass_val[1] = c1;
    r.rhs = rhs;
    return r;
}

} // namespace detail

/// Upwind-derived scheme: interior rows i = 1..n-1 plus closure rows at both
/// ends; placeholders at slots p(0) and q(n).
inline void rhs_new(const PipeGrid& grid, const PipeState& s, const SchemeOptions& opts,
                    PipeRows& out) {
    detail::prepare_fields(grid, s, out);
    const int n = grid.n;
    const double a = grid.geom.cross_section;
    const double dx = grid.dx;
    const auto w = source_weights(opts.source);
    const auto& rho = out.rho;
    const auto& lam = out.lam;
    const auto& f = out.fric;
    const auto& q = s.q;

    for (int i = 1; i < n; ++i) {
        const double dp_rhs = -lam[i] * lam[i] / (2.0 * dx * a) * (q[i + 1] - q[i - 1]);
        out.rows[slot_p(i)] = detail::diff_row1(slot_p(i), 1.0, dp_rhs);

        const double esum = opts.eig_sum == EigenvalueSum::printed ? lam[i] + lam[i + 1]
                                                                   : lam[i + 1] + lam[i - 1];
        const double src = w[0] * f[i - 1] + w[1] * f[i] + w[2] * f[i + 1];
        const double dq_rhs =
            -(lam[i] * a / (4.0 * dx)) * (rho[i + 1] - rho[i - 1]) * esum + a * src;
        out.rows[slot_q(i)] = detail::diff_row1(slot_q(i), 1.0, dq_rhs);
    }

    // inlet closure: d(q_0)/dt / a - d(p_0)/dt / lambda_0 = rhs
    {
        const double rhs = lam[0] * (q[1] - q[0]) / (a * dx) -
                           (lam[0] / (2.0 * dx)) * (rho[1] - rho[0]) * (lam[1] + lam[0]) + f[0];
        out.rows[slot_q(0)] = detail::diff_row2(slot_p(0), -1.0 / lam[0], slot_q(0), 1.0 / a, rhs);
    }
    // outlet closure: d(q_n)/dt / a + d(p_n)/dt / lambda_n = rhs
    {
        const double rhs = -lam[n] * (q[n] - q[n - 1]) / (a * dx) -
                           (lam[n] / (2.0 * dx)) * (rho[n] - rho[n - 1]) * (lam[n] + lam[n - 1]) +
                           f[n];
        out.rows[slot_p(n)] = detail::diff_row2(slot_p(n), 1.0 / lam[n], slot_q(n), 1.0 / a, rhs);
    }
}

/// Cell-pair midpoint scheme: pair rows i = 0..n-1; placeholders at p(0), q(n).
inline void rhs_midpoint(const PipeGrid& grid, const PipeState& s, const SchemeOptions& opts,
                         PipeRows& out) {
    if (grid.n < 3)
        throw std::invalid_argument("rhs_midpoint: needs at least 3 cells");
    detail::prepare_fields(grid, s, out);
    const int n = grid.n;
    const double a = grid.geom.cross_section;
    const double dx = grid.dx;
    const auto& rho = out.rho;
    const auto& lam = out.lam;
    const auto& p = s.p;
    const auto& q = s.q;

    for (int i = 0; i < n; ++i) {
        const double mp_rhs = -(q[i + 1] - q[i]) / (dx * a);
        out.rows[slot_p(i + 1)] =
            detail::diff_row2(slot_p(i), 0.5 / (lam[i] * lam[i]), slot_p(i + 1),
                              0.5 / (lam[i + 1] * lam[i + 1]), mp_rhs);

        double src;
        if (opts.verbatim_source) {
            const double qs = q[i] + q[i + 1];
            src = -grid.geom.friction * qs * std::abs(qs) /
                  (4.0 * grid.geom.diameter * a * (p[i] + p[i + 1]));
        } else {
            const double qm = 0.5 * (q[i] + q[i + 1]);
            const double rm = 0.5 * (rho[i] + rho[i + 1]);
            src = a * friction_source(grid.geom, rm, qm);
        }
        const double mq_rhs = -(a / dx) * (p[i + 1] - p[i]) + src;
        out.rows[slot_q(i)] = detail::diff_row2(slot_q(i), 0.5, slot_q(i + 1), 0.5, mq_rhs);
    }
}

/// One-sided endpoint scheme: p rows i = 1..n, q rows i = 0..n-1;
/// placeholders at p(0), q(n).
inline void rhs_endpoint(const PipeGrid& grid, const PipeState& s, const SchemeOptions& opts,
                         PipeRows& out) {
    if (grid.n < 3)
        throw std::invalid_argument("rhs_endpoint: needs at least 3 cells");
    detail::prepare_fields(grid, s, out);
    const int n = grid.n;
    const double a = grid.geom.cross_section;
    const double dx = grid.dx;
    const auto& rho = out.rho;
    const auto& lam = out.lam;
    const auto& p = s.p;
    const auto& q = s.q;

    for (int i = 1; i <= n; ++i) {
        const double rhs = -lam[i] * lam[i] / (dx * a) * (q[i] - q[i - 1]);
        out.rows[slot_p(i)] = detail::diff_row1(slot_p(i), 1.0, rhs);
    }
    for (int i = 0; i < n; ++i) {
        double src;
        if (opts.verbatim_source) {
            src = -grid.geom.friction * q[i] * std::abs(q[i]) /
                  (2.0 * grid.geom.diameter * a * p[i + 1]);
        } else {
            src = a * friction_source(grid.geom, rho[i + 1], q[i]);
        }
        const double rhs = -(a / dx) * (p[i + 1] - p[i]) + src;
        out.rows[slot_q(i)] = detail::diff_row1(slot_q(i), 1.0, rhs);
    }
}

inline void eval_pipe_rows(const PipeGrid& grid, const SchemeOptions& opts, const PipeState& s,
                           PipeRows& out) {
    switch (opts.kind) {
    case SchemeKind::upwind: rhs_new(grid, s, opts, out); break;
    case SchemeKind::midpoint: rhs_midpoint(grid, s, opts, out); break;
    case SchemeKind::endpoint: rhs_endpoint(grid, s, opts, out); break;
    }
}

/// Structural dependency columns per slot-aligned row (superset across
/// states; includes mass columns). Placeholders report no dependencies.
inline std::vector<RowStencil> pipe_row_structure(const PipeGrid& grid,
                                                  const SchemeOptions& opts) {
    const int n = grid.n;
    std::vector<RowStencil> st(2 * grid.points());
    auto diff = [&](int slot, std::vector<int> cols) {
        st[slot].differential = true;
        st[slot].cols = std::move(cols);
    };
    switch (opts.kind) {
    case SchemeKind::upwind:
        for (int i = 1; i < n; ++i) {
            diff(slot_p(i), {slot_p(i), slot_q(i - 1), slot_q(i + 1)});
            std::vector<int> cols = {slot_p(i - 1), slot_p(i), slot_p(i + 1), slot_q(i)};
            if (opts.source == SourceQuadrature::simpson) {
                cols.push_back(slot_q(i - 1));
                cols.push_back(slot_q(i + 1));
            }
            diff(slot_q(i), std::move(cols));
        }
        diff(slot_q(0), {slot_p(0), slot_q(0), slot_p(1), slot_q(1)});
        diff(slot_p(n), {slot_p(n - 1), slot_q(n - 1), slot_p(n), slot_q(n)});
        break;
    case SchemeKind::midpoint:
        for (int i = 0; i < n; ++i) {
            diff(slot_p(i + 1), {slot_p(i), slot_p(i + 1), slot_q(i), slot_q(i + 1)});
            diff(slot_q(i), {slot_p(i), slot_p(i + 1), slot_q(i), slot_q(i + 1)});
        }
        break;
    case SchemeKind::endpoint:
        for (int i = 1; i <= n; ++i) diff(slot_p(i), {slot_p(i), slot_q(i - 1), slot_q(i)});
        for (int i = 0; i < n; ++i) diff(slot_q(i), {slot_p(i), slot_p(i + 1), slot_q(i)});
        break;
    }
    return st;
}

/// Largest stable explicit step dt = dx / max_i lambda(rho_i).
inline double cfl_dt(const PipeGrid& grid, const PipeState& s) {
    require_match(grid, s);
    double lam_max = 0.0;
    for (int i = 0; i < grid.points(); ++i)
        lam_max = std::max(lam_max, grid.law.lambda_of_rho(grid.law.rho_of_p(s.p[i])));
    return grid.dx / lam_max;
}

/// Discrete steady profile of the upwind scheme's interior rows (isothermal):
/// constant flux C_q and the two-point pressure recurrence
///   p_{i+1} = p_{i-1} - dx f_g c^2 C_q |C_q| / (d a^2 p_i),
/// seeded by p0, p1. For C_q = 0 the pressures alternate p0, p1, p0, ...
inline PipeState discrete_steady_profile(const PipeGrid& grid, double C_q, double p0, double p1) {
    if (grid.law.kind() != LawKind::isothermal)
        throw std::invalid_argument("discrete_steady_profile: isothermal law required");
    if (!(p0 > 0.0 && p1 > 0.0))
        throw std::invalid_argument("discrete_steady_profile: seed pressures must be positive");
    const double c2 = sq(grid.law.c_ref());
    const double drop = grid.dx * grid.geom.friction * c2 * C_q * std::abs(C_q) /
                        (grid.geom.diameter * sq(grid.geom.cross_section));
    PipeState s(grid.points());
    s.p[0] = p0;
    s.p[1] = p1;
    for (int i = 1; i < grid.n; ++i) {
        s.p[i + 1] = s.p[i - 1] - drop / s.p[i];
        if (!(s.p[i + 1] > 0.0))
            throw std::domain_error("discrete_steady_profile: pressure fell to zero");
    }
    for (auto& qi : s.q) qi = C_q;
    return s;
}

/// Continuous steady profile: integrates dp/dx = f(rho(p), C_q) from the
/// inlet pressure; returns p at the requested ascending sample positions.
inline std::vector<double> continuous_steady_profile(const PressureLaw& law,
                                                     const PipeGeometry& geom, double C_q,
                                                     double p_inlet,
                                                     const std::vector<double>& x_samples,
                                                     double tol = 1e-10) {
    if (x_samples.empty()) return {};
    if (!(p_inlet > 0.0))
        throw std::invalid_argument("continuous_steady_profile: inlet pressure must be positive");
    if (!(x_samples.front() >= 0.0))
        throw std::invalid_argument("continuous_steady_profile: samples must start at x >= 0");
    auto rhs = [&](double, double p) { return friction_source(geom, law.rho_of_p(p), C_q); };
    auto guard = [](double, double p) {
        if (!(p > 0.0)) throw std::domain_error("continuous_steady_profile: pressure fell to zero");
    };
    if (x_samples.front() == 0.0) return integrate_rk45(rhs, p_inlet, x_samples, tol, guard);
    std::vector<double> xs;
    xs.reserve(x_samples.size() + 1);
    xs.push_back(0.0);
    xs.insert(xs.end(), x_samples.begin(), x_samples.end());
    auto vals = integrate_rk45(rhs, p_inlet, xs, tol, guard);
    vals.erase(vals.begin());
    return vals;
}

} // namespace gasnet
