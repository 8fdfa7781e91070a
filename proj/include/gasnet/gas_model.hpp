#pragma once

// Gas model: pressure law closures p = z(p) rho, characteristic speeds,
// Riemann-invariant transforms, the pipe friction source, and closed-form
// reference solutions used for verification.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gasnet/common.hpp"
#include "gasnet/numerics.hpp"

namespace gasnet {

enum class LawKind { isothermal, affine };

/// Pressure law p = z(p) rho with z(p) = c_ref^2 (1 + alpha p), alpha <= 0.
/// alpha = 0 is the isothermal law z = c^2. Hyperbolicity requires
/// d(p)/d(rho) > 0, i.e. admissible affine states satisfy 1 + alpha p > 0.
class PressureLaw {
public:
    static PressureLaw isothermal(double c) { return PressureLaw(LawKind::isothermal, c, 0.0); }

    static PressureLaw affine(double c, double alpha) {
        return PressureLaw(LawKind::affine, c, alpha);
    }

    LawKind kind() const { return kind_; }
    double c_ref() const { return c_; }
    double alpha() const { return alpha_; }

    /// beta = alpha c^2 collects the affine coupling; 0 for isothermal.
    double beta() const { return alpha_ * c_ * c_; }

    double z_of_p(double p) const {
        const double z = c_ * c_ * (1.0 + alpha_ * p);
        if (!(z > 0.0)) throw std::domain_error("PressureLaw: 1 + alpha p must stay positive");
        return z;
    }

    /// Unique positive pressure solving p = z(p) rho; closed form for both laws.
    double p_of_rho(double rho) const {
        require_rho(rho);
        const double b = beta();
        if (b == 0.0) return c_ * c_ * rho;
        const double denom = 1.0 - b * rho;
        if (!(denom > 0.0)) throw std::domain_error("PressureLaw: density outside admissible range");
        return c_ * c_ * rho / denom;
    }

    double rho_of_p(double p) const {
        if (!(p > 0.0)) throw std::domain_error("PressureLaw: pressure must be positive");
        return p / z_of_p(p);
    }

    /// Characteristic speed lambda(rho) = sqrt(dp/drho) = c / (1 - alpha c^2 rho).
    double lambda_of_rho(double rho) const {
        require_rho(rho);
        const double b = beta();
        if (b == 0.0) return c_;
        const double denom = 1.0 - b * rho;
        if (!(denom > 0.0)) throw std::domain_error("PressureLaw: density outside admissible range");
        return c_ / denom;
    }

    /// I(rho) = integral_0^rho lambda(s) ds; strictly increasing.
    /// Closed forms: c rho (isothermal) and -(c/beta) log(1 - beta rho) (affine).
    double invariant_integral(double rho) const {
        require_rho(rho);
        const double b = beta();
        if (b == 0.0) return c_ * rho;
        const double arg = 1.0 - b * rho;
        if (!(arg > 0.0)) throw std::domain_error("PressureLaw: density outside admissible range");
        return -(c_ / b) * std::log1p(-b * rho); // log1p: exact inverse of expm1 below
    }

    /// Inverse of invariant_integral on I > 0.
    double invariant_integral_inv(double value) const {
        if (!(value > 0.0))
            throw std::domain_error("PressureLaw: invariant integral value must be positive");
        const double b = beta();
        if (b == 0.0) return value / c_;
        return -std::expm1(-b * value / c_) / b; // cancellation-free near beta rho = 0
    }

private:
    PressureLaw(LawKind kind, double c, double alpha) : kind_(kind), c_(c), alpha_(alpha) {
        if (!(c > 0.0)) throw std::invalid_argument("PressureLaw: c must be positive");
        if (alpha > 0.0) throw std::invalid_argument("PressureLaw: alpha must be <= 0");
        if (kind == LawKind::isothermal && alpha != 0.0)
            throw std::invalid_argument("PressureLaw: isothermal law has alpha = 0");
    }

    static void require_rho(double rho) {
        if (!(rho > 0.0)) throw std::domain_error("PressureLaw: density must be positive");
    }

    LawKind kind_;
    double c_;
    double alpha_;
};

/// Generic quadrature route for I(rho); provided for laws without a closed
/// form and used as an independent cross-check of the closed forms.
inline double invariant_integral_quadrature(const PressureLaw& law, double rho,
                                            double tol = 1e-12) {
    return adaptive_simpson([&](double s) { return s > 0.0 ? law.lambda_of_rho(s) : law.c_ref(); },
                            0.0, rho, tol);
}

/// Generic root-finding route inverting I; cross-checks the closed forms.
inline double invariant_integral_inv_bracketed(const PressureLaw& law, double value,
                                               double tol = 1e-14) {
    double hi = 1.0;
    while (law.invariant_integral(hi) < value) hi *= 2.0;
    return newton_bisect([&](double r) { return law.invariant_integral(r) - value; },
                         [&](double r) { return law.lambda_of_rho(r); }, 1e-300, hi, tol);
}

/// Static pipe data. Cross-section defaults to a circular bore.
struct PipeGeometry {
    double length = 0.0;        // m
    double diameter = 0.0;      // m
    double friction = 0.0;      // Darcy friction factor, dimensionless
    double cross_section = 0.0; // m^2

    static PipeGeometry create(double length, double diameter, double friction,
                               double cross_section = 0.0) {
        if (!(length > 0.0)) throw std::invalid_argument("PipeGeometry: length must be positive");
        if (!(diameter > 0.0)) throw std::invalid_argument("PipeGeometry: diameter must be positive");
        if (!(friction >= 0.0)) throw std::invalid_argument("PipeGeometry: friction must be >= 0");
        if (cross_section == 0.0)
            cross_section = std::numbers::pi * diameter * diameter / 4.0;
        if (!(cross_section > 0.0))
            throw std::invalid_argument("PipeGeometry: cross-section must be positive");
        return PipeGeometry{length, diameter, friction, cross_section};
    }
};

/// Friction source of the momentum balance (1/a) dq/dt + dp/dx = f:
///   f(rho, q) = -f_g / (2 d a^2) * q|q| / rho.
/// Odd in q and singular-free for rho > 0.
inline double friction_source(const PipeGeometry& geom, double rho, double q) {
    return -geom.friction / (2.0 * geom.diameter * sq(geom.cross_section)) * q * std::abs(q) / rho;
}

/// Riemann invariants w+- = (q/a +- I(rho)) / 2 of the frictionless system.
struct RiemannPair {
    double w_plus = 0.0;
    double w_minus = 0.0;
};

inline RiemannPair to_riemann(const PressureLaw& law, const PipeGeometry& geom, double rho,
                              double q) {
    const double u = q / geom.cross_section;
    const double I = law.invariant_integral(rho);
    return RiemannPair{0.5 * (u + I), 0.5 * (u - I)};
}

inline void from_riemann(const PressureLaw& law, const PipeGeometry& geom, const RiemannPair& w,
                         double& rho, double& q) {
    const double I = w.w_plus - w.w_minus;
    if (!(I > 0.0)) throw std::domain_error("from_riemann: invariants imply non-positive density");
    rho = law.invariant_integral_inv(I);
    q = geom.cross_section * (w.w_plus + w.w_minus);
}

/// Spatially uniform exact solution: rho(t) = rho0, q(t) = 1 / (C0 + C1 t)
/// with C1 = f_g / (2 d rho0), valid for unit cross-section (a = 1).
inline double uniform_flow_c1(const PipeGeometry& geom, double rho0) {
    return geom.friction / (2.0 * geom.diameter * rho0);
}

inline void uniform_flow_reference(double rho0, double c0, const PipeGeometry& geom, double t,
                                   double& rho, double& q) {
    if (!(rho0 > 0.0)) throw std::invalid_argument("uniform_flow_reference: rho0 must be positive");
    if (!(c0 > 0.0)) throw std::invalid_argument("uniform_flow_reference: c0 must be positive");
    const double denom = c0 + uniform_flow_c1(geom, rho0) * t;
    if (!(denom > 0.0)) throw std::domain_error("uniform_flow_reference: solution blew up");
    rho = rho0;
    q = 1.0 / denom;
}

/// Traveling-wave profile: integrates y'(s) (1 - (1-y)^2) = -C y (1-y),
/// equivalently y' = -C (1-y) / (2-y), keeping y inside (0,1).
/// Samples must start at the s carrying y0 and increase.
inline std::vector<double> traveling_wave_reference(double C, double y0,
                                                    const std::vector<double>& s_values,
                                                    double tol = 1e-10) {
    if (!(y0 > 0.0 && y0 < 1.0))
        throw std::invalid_argument("traveling_wave_reference: y0 must lie in (0,1)");
    return integrate_rk45([C](double, double y) { return -C * (1.0 - y) / (2.0 - y); }, y0,
                          s_values, tol, [](double, double y) {
                              if (!(y > 0.0 && y < 1.0))
                                  throw std::domain_error(
                                      "traveling_wave_reference: profile left (0,1)");
                          });
}

/// Principal branch of the Lambert W function on [-1/e, inf), by Halley
/// iteration; |W e^W - x| <= 1e-14 (1 + |x|) on the admissible domain.
inline double lambert_w(double x) {
    static const double inv_e = std::exp(-1.0);
    if (x < -inv_e) throw std::domain_error("lambert_w: argument below -1/e");
    if (x == 0.0) return 0.0;
    double w;
    if (x < 0.0) {
        // series around the branch point W(-1/e) = -1
        const double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (x <= std::numbers::e) {
        w = x / (1.0 + x);
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int it = 0; it < 100; ++it) {
        if (x < 0.0 && w <= -1.0) w = -1.0 + 1e-12; // stay on the principal branch
        const double ew = std::exp(w);
        const double r = w * ew - x;
        const double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        const double dw = r / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-16 * (1.0 + std::abs(w))) break;
    }
    return w;
}

} // namespace gasnet
