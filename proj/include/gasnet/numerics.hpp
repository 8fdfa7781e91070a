#pragma once

// Small numerical building blocks: adaptive quadrature, safeguarded scalar
// root finding, and an embedded Runge-Kutta integrator with step control.
// These back the reference solutions; they are not on the simulation hot path.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gasnet {

namespace detail {

inline double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_rule(a, fa, m, fm, flm);
    const double right = simpson_rule(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson_rule(a, fa, b, fb, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

/// Newton iteration safeguarded by bisection on a sign-changing bracket [lo,hi].
/// df may be empty; a secant-style finite difference is used then.
template <class F, class DF>
double newton_bisect(F&& f, DF&& df, double lo, double hi, double tol = 1e-14,
                     int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("newton_bisect: no sign change on bracket");
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < max_iter; ++it) {
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double d = df(x);
        double step = (d != 0.0) ? fx / d : 0.0;
        double next = x - step;
        // fall back to bisection when Newton leaves the bracket or stalls
        if (!(next > lo && next < hi) || step == 0.0) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= tol * (1.0 + std::abs(x))) return next;
        x = next;
    }
    return x;
}

/// Dense-output-free embedded Cash-Karp RK45 integration of y' = f(s, y)
/// from s_values.front() through every sample point, relative tolerance tol.
/// Returns y at each sample; y0 corresponds to the first sample.
/// The guard callback may throw to abort on inadmissible states.
inline std::vector<double> integrate_rk45(const std::function<double(double, double)>& f,
                                          double y0, const std::vector<double>& s_values,
                                          double tol = 1e-10,
                                          const std::function<void(double, double)>& guard = {}) {
    if (s_values.empty()) return {};
    for (std::size_t k = 1; k < s_values.size(); ++k)
        if (!(s_values[k] > s_values[k - 1]))
            throw std::invalid_argument("integrate_rk45: sample points must increase");

    // Cash-Karp tableau
    static constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
    static constexpr double b21 = 1.0 / 5;
    static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                            b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                            c6 = 512.0 / 1771;
    static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                            d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336,
                            d6 = c6 - 1.0 / 4;

    std::vector<double> out;
    out.reserve(s_values.size());
    out.push_back(y0);

    double s = s_values.front();
    double y = y0;
    const double span = s_values.back() - s_values.front();
    double h = span > 0.0 ? span / 64.0 : 0.0;

    for (std::size_t k = 1; k < s_values.size(); ++k) {
        const double s_target = s_values[k];
        while (s < s_target) {
            h = std::min(h, s_target - s);
            const double k1 = f(s, y);
            const double k2 = f(s + a2 * h, y + h * (b21 * k1));
            const double k3 = f(s + a3 * h, y + h * (b31 * k1 + b32 * k2));
            const double k4 = f(s + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
            const double k5 = f(s + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
            const double k6 =
                f(s + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
            const double y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
            const double err = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
            const double scale = tol * (1.0 + std::abs(y));
            const double ratio = std::abs(err) / scale;
            if (ratio <= 1.0) {
                s += h;
                y = y5;
                if (guard) guard(s, y);
                h *= std::min(5.0, 0.9 * std::pow(std::max(ratio, 1e-16), -0.2));
            } else {
                h *= std::max(0.1, 0.9 * std::pow(ratio, -0.25));
                if (!(h > std::numeric_limits<double>::min() * 1e4))
                    throw std::runtime_error("integrate_rk45: step size underflow");
            }
        }
        out.push_back(y);
        s = s_target;
    }
    return out;
}

} // namespace gasnet
