#pragma once

// Post-processing helpers for experiment evaluation: trajectory probes, a
// normalized oscillation metric, least-squares convergence slopes, and the
// interior steady-residual measure used for well-balance order studies.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gasnet/integrate.hpp"

namespace gasnet {

/// Time series of q (resp. p) at one cell of one pipe across snapshots.
inline std::vector<double> flux_series(const Trajectory& traj, int pipe, int cell) {
    std::vector<double> v;
    v.reserve(traj.states.size());
    for (const auto& s : traj.states) v.push_back(s.pipes[pipe].q[cell]);
    return v;
}

inline std::vector<double> pressure_series(const Trajectory& traj, int pipe, int cell) {
    std::vector<double> v;
    v.reserve(traj.states.size());
    for (const auto& s : traj.states) v.push_back(s.pipes[pipe].p[cell]);
    return v;
}

inline double total_variation(const std::vector<double>& v) {
    double tv = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) tv += std::abs(v[k] - v[k - 1]);
    return tv;
}

/// Dimensionless persistence-of-oscillation measure: total variation of the
/// series over its trailing window (default last 20% of samples) divided by
/// the window's mean magnitude. A signal that has settled scores near zero;
/// sustained wiggles score in proportion to their swing count and size.
inline double oscillation_metric(const std::vector<double>& series, double window_fraction = 0.2) {
    if (series.size() < 3) throw std::invalid_argument("oscillation_metric: series too short");
    if (!(window_fraction > 0.0) || window_fraction > 1.0)
        throw std::invalid_argument("oscillation_metric: window fraction must be in (0,1]");
    std::size_t len = static_cast<std::size_t>(std::ceil(window_fraction * series.size()));
    len = std::max<std::size_t>(len, 2);
    const std::size_t begin = series.size() - len;

    double tv = 0.0, mean_abs = 0.0;
    for (std::size_t k = begin; k < series.size(); ++k) {
        if (k > begin) tv += std::abs(series[k] - series[k - 1]);
        mean_abs += std::abs(series[k]);
    }
    mean_abs /= static_cast<double>(len);
    return tv / std::max(mean_abs, 1e-300);
}

/// Least-squares slope of log(err) against log(h); err ~ C h^s gives s.
inline double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw std::invalid_argument("loglog_slope: need matching samples, at least 2");
    const auto n = static_cast<double>(h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!(h[k] > 0.0) || !(err[k] > 0.0))
            throw std::invalid_argument("loglog_slope: values must be positive");
        const double x = std::log(h[k]);
        const double y = std::log(err[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Max central-difference residual of d(rho)/dt + (1/a) d(q)/dx on the exact
/// traveling wave. The wave translates at unit speed with rho = q = y/(1-y)
/// and unit cross-section, so the continuous residual is identically zero and
/// only finite-difference truncation (with dt = dx/2, an O(dx^2) term)
/// remains. The profile y comes from the shape ODE y' = -C (1-y)/(2-y),
/// integrated from y(0) = y0 over s in [0, s_span].
inline double traveling_wave_mass_residual(double C, double y0, double s_span, double dx) {
    if (!(dx > 0.0) || !(s_span > 4.0 * dx))
        throw std::invalid_argument("traveling_wave_mass_residual: need s_span > 4 dx > 0");
    const double h = 0.5 * dx; // common grid for the space and time offsets
    const auto m = static_cast<std::size_t>(std::floor(s_span / h)) + 1;
    std::vector<double> s(m);
    for (std::size_t j = 0; j < m; ++j) s[j] = static_cast<double>(j) * h;
    const std::vector<double> y = traveling_wave_reference(C, y0, s, 1e-12);
    std::vector<double> field(m); // rho and q coincide on this wave
    for (std::size_t j = 0; j < m; ++j) field[j] = y[j] / (1.0 - y[j]);
    double worst = 0.0;
    for (std::size_t j = 2; j + 2 < m; ++j) {
        const double d_dt = (field[j - 1] - field[j + 1]) / (2.0 * h);
        const double d_dx = (field[j + 2] - field[j - 2]) / (2.0 * dx);
        worst = std::max(worst, std::abs(d_dt + d_dx));
    }
    return worst;
}

/// Interior steady defect of a scheme on a given state: the largest |dq_i/dt|
/// over the interior q rows (the p rows vanish identically for constant q).
inline double steady_residual(const PipeGrid& grid, const SchemeOptions& opts,
                              const PipeState& s) {
    if (opts.kind != SchemeKind::upwind)
        throw std::invalid_argument("steady_residual: defined on the upwind scheme's rows");
    PipeRows rows;
    eval_pipe_rows(grid, opts, s, rows);
    double worst = 0.0;
    for (int i = 1; i < grid.n; ++i) {
        const LocalRow& r = rows.rows[slot_q(i)];
        if (r.differential && r.mass_n == 1) worst = std::max(worst, std::abs(r.rhs));
    }
    return worst;
}

} // namespace gasnet
