#pragma once

// Directed pipe network: nodes (junctions or boundaries) joined by pipes.
// A pipe runs from its `from` node (grid point 0) to its `to` node (grid
// point n). Junction coupling enforces pressure equality across all attached
// pipe ends plus a single flux balance (inflow sum equals outflow sum).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gasnet/grid.hpp"
#include "gasnet/schemes.hpp"

namespace gasnet {

enum class NodeKind { junction, pressure_boundary, flux_boundary };

struct Node {
    std::string id;
    NodeKind kind = NodeKind::junction;
    std::optional<std::string> signal; // signal key; defaults to the node id
};

struct Pipe {
    std::string id;
    std::string from;
    std::string to;
    PipeGeometry geom;
    int cells = 0;
};

/// One attached pipe end: pipe index plus which end touches the node.
struct PipeEnd {
    int pipe = -1;
    bool at_outlet = false; // true: grid point n (the `to` end); false: point 0
};

class Network {
public:
    Network(PressureLaw law, std::vector<Node> nodes, std::vector<Pipe> pipes)
        : law_(law), nodes_(std::move(nodes)), pipes_(std::move(pipes)) {
        for (int k = 0; k < static_cast<int>(nodes_.size()); ++k) {
            if (!node_index_.emplace(nodes_[k].id, k).second)
                throw std::invalid_argument("Network: duplicate node id " + nodes_[k].id);
        }
        ends_.resize(nodes_.size());
        std::set<std::string> pipe_ids;
        for (int k = 0; k < static_cast<int>(pipes_.size()); ++k) {
            const Pipe& pp = pipes_[k];
            if (!pipe_ids.insert(pp.id).second)
                throw std::invalid_argument("Network: duplicate pipe id " + pp.id);
            if (pp.from == pp.to)
                throw std::invalid_argument("Network: pipe " + pp.id + " is a self-loop");
            auto from = node_index_.find(pp.from);
            auto to = node_index_.find(pp.to);
            if (from == node_index_.end())
                throw std::invalid_argument("Network: pipe " + pp.id + " references unknown node " +
                                            pp.from);
            if (to == node_index_.end())
                throw std::invalid_argument("Network: pipe " + pp.id + " references unknown node " +
                                            pp.to);
            ends_[from->second].push_back(PipeEnd{k, false});
            ends_[to->second].push_back(PipeEnd{k, true});
            grids_.push_back(PipeGrid::create(pp.geom, law_, pp.cells));
        }
        // deterministic end ordering at every node: by pipe id, inlet before outlet
        for (auto& list : ends_)
            std::sort(list.begin(), list.end(), [&](const PipeEnd& a, const PipeEnd& b) {
                if (pipes_[a.pipe].id != pipes_[b.pipe].id)
                    return pipes_[a.pipe].id < pipes_[b.pipe].id;
                return a.at_outlet < b.at_outlet;
            });
    }

    const PressureLaw& law() const { return law_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Pipe>& pipes() const { return pipes_; }
    const std::vector<PipeGrid>& grids() const { return grids_; }
    const PipeGrid& grid(int pipe) const { return grids_[pipe]; }

    int node_index(const std::string& id) const {
        auto it = node_index_.find(id);
        if (it == node_index_.end())
            throw std::invalid_argument("Network: unknown node id " + id);
        return it->second;
    }

    /// Pipe ends attached to a node, in pipe declaration order.
    const std::vector<PipeEnd>& ends_at(int node) const { return ends_[node]; }

    int degree(int node) const { return static_cast<int>(ends_[node].size()); }

private:
    PressureLaw law_;
    std::vector<Node> nodes_;
    std::vector<Pipe> pipes_;
    std::vector<PipeGrid> grids_;
    std::map<std::string, int> node_index_;
    std::vector<std::vector<PipeEnd>> ends_;
};

/// Structural audit results; empty list means the network is usable.
struct NetworkDiagnostics {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks connectivity, boundary/junction degree rules, and the presence of
/// at least one pressure boundary to anchor the pressure level.
inline NetworkDiagnostics validate(const Network& net) {
    NetworkDiagnostics diag;
    const auto& nodes = net.nodes();
    if (net.pipes().empty()) {
        diag.violations.push_back("network has no pipes");
        return diag;
    }

    // Every degree-1 node must be a boundary node (degree-1 junctions dangle);
    // boundary kinds may also sit on higher-degree nodes (a demand shared by
    // several pipe ends or a supply feeding several pipes).
    bool has_pressure = false;
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
        const int deg = net.degree(v);
        if (deg == 0) diag.violations.push_back("node " + nodes[v].id + " has no attached pipe");
        if (nodes[v].kind == NodeKind::junction) {
            if (deg == 1)
                diag.violations.push_back("junction " + nodes[v].id +
                                          " has degree 1; ends of the network must be boundary nodes");
        } else if (nodes[v].kind == NodeKind::pressure_boundary) {
            has_pressure = true;
        }
    }
    if (!has_pressure)
        diag.violations.push_back("network needs at least one pressure boundary node");

    // connectivity over the undirected pipe graph
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const PipeEnd& e : net.ends_at(v)) {
            const Pipe& pp = net.pipes()[e.pipe];
            const int other = net.node_index(e.at_outlet ? pp.from : pp.to);
            if (!seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
        if (!seen[v]) diag.violations.push_back("node " + nodes[v].id + " is not connected");
    return diag;
}

/// Stacked network state: one PipeState per pipe, in pipe order.
struct NetState {
    std::vector<PipeState> pipes;

    static NetState uniform(const Network& net, double p, double q) {
        NetState s;
        for (const auto& g : net.grids()) {
            PipeState ps(g.points());
            for (auto& v : ps.p) v = p;
            for (auto& v : ps.q) v = q;
            s.pipes.push_back(std::move(ps));
        }
        return s;
    }
};

/// Endpoint values of pipe `e` seen from its node-facing end.
inline double end_pressure(const NetState& s, const PipeEnd& e, const Network& net) {
    const auto& ps = s.pipes[e.pipe];
    return e.at_outlet ? ps.p[net.grid(e.pipe).n] : ps.p[0];
}

inline double end_flux(const NetState& s, const PipeEnd& e, const Network& net) {
    const auto& ps = s.pipes[e.pipe];
    return e.at_outlet ? ps.q[net.grid(e.pipe).n] : ps.q[0];
}

/// Junction residuals at a node: degree-1 pressure equalities against the
/// reference end (the first attached end of the lowest-id pipe) followed by
/// the flux balance sum(incoming q_n) - sum(outgoing q_0).
inline std::vector<double> coupling_residual(const Network& net, const NetState& s,
                                             const std::string& node_id) {
    const int v = net.node_index(node_id);
    if (net.nodes()[v].kind != NodeKind::junction)
        throw std::invalid_argument("coupling_residual: node " + node_id + " is not a junction");
    const auto& ends = net.ends_at(v);
    std::vector<double> res;
    res.reserve(ends.size());
    const double p_ref = end_pressure(s, ends.front(), net);
    for (std::size_t k = 1; k < ends.size(); ++k)
        res.push_back(end_pressure(s, ends[k], net) - p_ref);
    double balance = 0.0;
    for (const PipeEnd& e : ends) balance += e.at_outlet ? end_flux(s, e, net)
                                                         : -end_flux(s, e, net);
    res.push_back(balance);
    return res;
}

} // namespace gasnet
