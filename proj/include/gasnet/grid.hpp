#pragma once

#include <stdexcept>
#include <vector>

#include "gasnet/gas_model.hpp"

namespace gasnet {

/// Uniform cell-point grid on a single pipe: points x_i = i dx, i = 0..n.
struct PipeGrid {
    PipeGeometry geom;
    PressureLaw law;
    int n = 0;     // number of cells; n+1 grid points
    double dx = 0; // m

    static PipeGrid create(PipeGeometry geom, PressureLaw law, int n) {
        if (n < 2) throw std::invalid_argument("PipeGrid: need at least 2 cells");
        return PipeGrid{geom, law, n, geom.length / n};
    }

    int points() const { return n + 1; }
    double x(int i) const { return dx * i; }
};

/// Pointwise state on a pipe grid: pressures p_i (Pa) and fluxes q_i (kg/s).
struct PipeState {
    std::vector<double> p;
    std::vector<double> q;

    PipeState() = default;
    explicit PipeState(int points) : p(points, 0.0), q(points, 0.0) {}

    int points() const { return static_cast<int>(p.size()); }
};

inline void require_match(const PipeGrid& grid, const PipeState& state) {
    if (state.points() != grid.points() || state.q.size() != state.p.size())
        throw std::invalid_argument("PipeState does not match grid point count");
}

} // namespace gasnet
