#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasnet/common.hpp"

namespace gasnet {

enum class SignalInterp { pconst, linear };
enum class SignalUnit { bar, pa, kg_per_s };

/// Boundary time signal: breakpoints with piecewise-constant
/// (right-continuous) or piecewise-linear interpolation, clamped outside the
/// covered interval. Values are stored in file units; eval() returns SI.
struct Signal {
    SignalInterp interp = SignalInterp::pconst;
    SignalUnit unit = SignalUnit::pa;
    std::vector<std::pair<double, double>> points; // (t ascending, value)

    static Signal constant(double value, SignalUnit unit) {
        return Signal{SignalInterp::pconst, unit, {{0.0, value}}};
    }

    static Signal step(double t_jump, double before, double after, SignalUnit unit) {
        return Signal{SignalInterp::pconst, unit, {{0.0, before}, {t_jump, after}}};
    }

    void validate() const {
        if (points.empty()) throw std::invalid_argument("Signal: needs at least one point");
        for (std::size_t k = 1; k < points.size(); ++k)
            if (!(points[k].first > points[k - 1].first))
                throw std::invalid_argument("Signal: breakpoints must strictly increase");
    }

    double to_si(double v) const { return unit == SignalUnit::bar ? bar_to_pa(v) : v; }

    /// Value in SI units (Pa or kg/s) at time t.
    double eval(double t) const {
        if (points.empty()) throw std::logic_error("Signal: empty");
        if (t <= points.front().first) return to_si(points.front().second);
        if (t >= points.back().first) return to_si(points.back().second);
        // last breakpoint with t_k <= t
        auto it = std::upper_bound(points.begin(), points.end(), t,
                                   [](double v, const auto& pt) { return v < pt.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        if (interp == SignalInterp::pconst) return to_si(lo.second);
        const double w = (t - lo.first) / (hi.first - lo.first);
        return to_si(lo.second + w * (hi.second - lo.second));
    }
};

} // namespace gasnet
