#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace gasnet {

/// Thrown when an explicit step is requested with dt above the CFL bound.
struct CflViolation : std::runtime_error {
    CflViolation(double dt, double dt_max)
        : std::runtime_error("explicit step dt=" + std::to_string(dt) +
                             " exceeds CFL bound dt_max=" + std::to_string(dt_max)),
          dt(dt), dt_max(dt_max) {}
    double dt;
    double dt_max;
};

/// Thrown when the nonlinear solve of an implicit step fails to converge.
struct NewtonDiverged : std::runtime_error {
    explicit NewtonDiverged(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on malformed input files; carries human-readable field context.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double bar_in_pa = 1.0e5;

inline double bar_to_pa(double bar) { return bar * bar_in_pa; }
inline double pa_to_bar(double pa) { return pa / bar_in_pa; }

inline double sq(double x) { return x * x; }

} // namespace gasnet
