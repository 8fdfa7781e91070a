#pragma once

// Scenario = everything needed to reproduce a run: the network, boundary
// signals, initial-condition policy, scheme selection, and integrator
// settings. Values are SI internally (Pa, kg/s, s, m).

#include <map>
#include <string>

#include "gasnet/network.hpp"
#include "gasnet/signal.hpp"

namespace gasnet {

enum class TimeMethod { implicit_euler, bdf2, explicit_euler };

/// Treatment of the two per-pipe endpoint states the boundary rows do not
/// pin during explicit stepping: advance them with the characteristic
/// closure rows, or hold them fixed as boundary data.
enum class ExplicitBoundary { closure, hold };

struct IntegratorConfig {
    TimeMethod method = TimeMethod::implicit_euler;
    double dt = 1.0;
    double newton_tol = 1e-10;
    int newton_max_iter = 50;
    double dt_min = 1e-6;
    double cfl_safety = 0.9; // explicit stepping only
    ExplicitBoundary explicit_boundary = ExplicitBoundary::closure;

    void validate() const {
        if (!(dt_min > 0.0) || !(dt > dt_min))
            throw std::invalid_argument("IntegratorConfig: require dt > dt_min > 0");
        if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
            throw std::invalid_argument("IntegratorConfig: require 0 < cfl_safety <= 1");
        if (!(newton_tol > 0.0))
            throw std::invalid_argument("IntegratorConfig: newton_tol must be positive");
        if (newton_max_iter < 1)
            throw std::invalid_argument("IntegratorConfig: newton_max_iter must be >= 1");
    }
};

enum class InitPolicy { steady, uniform };

struct InitSpec {
    InitPolicy policy = InitPolicy::steady;
    double p = 0.0; // Pa, uniform policy only
    double q = 0.0; // kg/s, uniform policy only

    static InitSpec steady() { return {InitPolicy::steady, 0.0, 0.0}; }
    static InitSpec uniform(double p, double q) { return {InitPolicy::uniform, p, q}; }
};

struct Scenario {
    explicit Scenario(Network net) : network(std::move(net)) {}

    Network network;
    std::map<std::string, Signal> signals; // keyed by node id (or node.signal)
    double t_end = 0.0;
    double output_dt = 1.0;
    InitSpec init;
    SchemeOptions scheme;
    IntegratorConfig integrator;
    std::string name;
};

} // namespace gasnet
