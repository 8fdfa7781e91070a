#pragma once

// Global differential-algebraic system over a network.
//
// The unknown vector stacks per-pipe blocks (pipe-major); inside a block the
// layout is cell-major with p before q: column of p_i is 2i, of q_i is 2i+1.
// Rows align 1:1 with unknown slots. Scheme rows fill all slots except the
// two per-pipe placeholders p(0) and q(n); assembly replaces each placeholder
// with exactly one algebraic row. A node of degree d contributes d rows:
//   pressure boundary  ->  p_end - P(t) = 0 at every attached end
//   flux boundary      ->  flux balance with demand,
//                          sum(q_in) - sum(q_out) - Q(t) = 0,
//                          plus d-1 pressure equalities
//   junction           ->  flux balance (zero demand) plus d-1 equalities
//                          against the reference end (lowest pipe id)
// so that #rows == #unknowns always holds.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gasnet/network.hpp"
#include "gasnet/signal.hpp"

namespace gasnet {

/// One evaluated global row. Differential rows mean
///     sum_j mass_val[j] * du[mass_col[j]]/dt = value,
/// algebraic rows mean  value = 0.
struct GlobalRow {
    bool differential = false;
    int mass_n = 0;
    int mass_col[2] = {-1, -1};
    double mass_val[2] = {0.0, 0.0};
    double value = 0.0;
};

/// Reusable per-pipe scratch so repeated residual evaluations do not allocate.
struct DaeWorkspace {
    std::vector<PipeState> states;
    std::vector<PipeRows> rows;
};

namespace detail {

enum class BoundRowKind { pressure_pin, flux_balance, pressure_equality };

struct BoundRow {
    BoundRowKind kind = BoundRowKind::pressure_pin;
    int node = -1;     // signal source; -1 for junction balances (no signal)
    int col = -1;      // pinned / compared column
    int ref_col = -1;  // pressure_equality reference column
    std::vector<std::pair<int, double>> terms; // flux_balance: (column, sign)
};

} // namespace detail

/// A boundary row that directly pins one state column: u[col] = scale * signal(t).
struct ValuePin {
    int col = -1;
    int node = -1;
    double scale = 1.0;
};

class DaeSystem {
public:
    DaeSystem(Network net, SchemeOptions opts, std::map<std::string, Signal> signals)
        : net_(std::move(net)), opts_(opts) {
        const auto diag = validate(net_);
        if (!diag.ok())
            throw std::invalid_argument("assemble_dae: invalid network: " + diag.violations.front());

        const auto& pipes = net_.pipes();
        pipe_base_.resize(pipes.size());
        int offset = 0;
        for (std::size_t k = 0; k < pipes.size(); ++k) {
            pipe_base_[k] = offset;
            offset += 2 * net_.grid(static_cast<int>(k)).points();
        }
        total_ = offset;

        // resolve boundary signals (key defaults to the node id)
        const auto& nodes = net_.nodes();
        node_signal_.resize(nodes.size());
        for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
            if (nodes[v].kind == NodeKind::junction) {
                if (nodes[v].signal)
                    throw std::invalid_argument("assemble_dae: junction " + nodes[v].id +
                                                " must not carry a signal");
                continue;
            }
            const std::string key = nodes[v].signal ? *nodes[v].signal : nodes[v].id;
            auto it = signals.find(key);
            if (it == signals.end())
                throw std::invalid_argument("assemble_dae: boundary node " + nodes[v].id +
                                            " has no signal '" + key + "'");
            it->second.validate();
            const bool is_p = nodes[v].kind == NodeKind::pressure_boundary;
            const bool p_unit = it->second.unit == SignalUnit::bar || it->second.unit == SignalUnit::pa;
            if (is_p != p_unit)
                throw std::invalid_argument("assemble_dae: signal '" + key +
                                            "' unit does not match the boundary kind of node " +
                                            nodes[v].id);
            node_signal_[v] = it->second;
        }

        // replace the per-pipe placeholder rows p(0) / q(n)
        bound_rows_.assign(total_, detail::BoundRow{});
        is_bound_.assign(total_, 0);
        auto claim = [&](int row, detail::BoundRow br) {
            if (is_bound_[row])
                throw std::logic_error("assemble_dae: placeholder slot claimed twice");
            is_bound_[row] = 1;
            bound_rows_[row] = std::move(br);
        };
        for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
            const auto& ends = net_.ends_at(v);
            if (nodes[v].kind == NodeKind::pressure_boundary) {
                // every attached end sees the supplied pressure
                for (const PipeEnd& e : ends) {
                    detail::BoundRow br;
                    br.kind = detail::BoundRowKind::pressure_pin;
                    br.node = v;
                    br.col = end_p_col(e);
                    claim(placeholder_row(e), std::move(br));
                }
                continue;
            }
            // junction and flux boundary share the structure: one flux balance
            // (with the demand signal on flux nodes) plus degree-1 pressure
            // equalities against the reference end.
            detail::BoundRow bal;
            bal.kind = detail::BoundRowKind::flux_balance;
            bal.node = nodes[v].kind == NodeKind::flux_boundary ? v : -1;
            for (const PipeEnd& e : ends)
                bal.terms.emplace_back(end_q_col(e), e.at_outlet ? 1.0 : -1.0);
            claim(placeholder_row(ends[0]), std::move(bal));
            for (std::size_t k = 1; k < ends.size(); ++k) {
                detail::BoundRow eq;
                eq.kind = detail::BoundRowKind::pressure_equality;
                eq.col = end_p_col(ends[k]);
                eq.ref_col = end_p_col(ends[0]);
                claim(placeholder_row(ends[k]), std::move(eq));
            }
        }

        // every scheme placeholder must be claimed, and nothing else
        n_algebraic_ = 0;
        for (std::size_t k = 0; k < pipes.size(); ++k) {
            const auto st = pipe_row_structure(net_.grid(static_cast<int>(k)), opts_);
            for (int s = 0; s < static_cast<int>(st.size()); ++s) {
                const int row = pipe_base_[k] + s;
                if (st[s].differential == static_cast<bool>(is_bound_[row]))
                    throw std::logic_error("assemble_dae: row/unknown count mismatch at row " +
                                           std::to_string(row));
                n_algebraic_ += is_bound_[row];
            }
        }
    }

    int size() const { return total_; }
    int n_algebraic() const { return n_algebraic_; }
    int n_differential() const { return total_ - n_algebraic_; }
    const Network& network() const { return net_; }
    const SchemeOptions& options() const { return opts_; }

    int pipe_base(int pipe) const { return pipe_base_[pipe]; }
    int col_p(int pipe, int i) const { return pipe_base_[pipe] + slot_p(i); }
    int col_q(int pipe, int i) const { return pipe_base_[pipe] + slot_q(i); }

    /// Signal of a boundary node (by node index).
    const Signal& node_signal(int v) const { return node_signal_[v]; }

    DaeWorkspace make_workspace() const {
        DaeWorkspace ws;
        for (const auto& g : net_.grids()) {
            ws.states.emplace_back(g.points());
            ws.rows.emplace_back();
        }
        return ws;
    }

    Eigen::VectorXd pack(const NetState& s) const {
        Eigen::VectorXd u(total_);
        for (std::size_t k = 0; k < s.pipes.size(); ++k) {
            const auto& ps = s.pipes[k];
            for (std::size_t i = 0; i < ps.p.size(); ++i) {
                u[col_p(static_cast<int>(k), static_cast<int>(i))] = ps.p[i];
                u[col_q(static_cast<int>(k), static_cast<int>(i))] = ps.q[i];
            }
        }
        return u;
    }

    NetState unpack(const Eigen::VectorXd& u) const {
        NetState s;
        for (int k = 0; k < static_cast<int>(net_.pipes().size()); ++k) {
            PipeState ps(net_.grid(k).points());
            for (int i = 0; i < net_.grid(k).points(); ++i) {
                ps.p[i] = u[col_p(k, i)];
                ps.q[i] = u[col_q(k, i)];
            }
            s.pipes.push_back(std::move(ps));
        }
        return s;
    }

    Eigen::VectorXd uniform_state(double p, double q) const {
        return pack(NetState::uniform(net_, p, q));
    }

    /// Evaluates all rows at (u, t). Differential rows carry the scheme mass
    /// coefficients and right-hand side; algebraic rows carry the constraint
    /// residual. Throws std::domain_error on inadmissible states.
    void eval(const Eigen::VectorXd& u, double t, DaeWorkspace& ws,
              std::vector<GlobalRow>& out) const {
        out.assign(total_, GlobalRow{});
        for (int k = 0; k < static_cast<int>(net_.pipes().size()); ++k) {
            const PipeGrid& g = net_.grid(k);
            PipeState& ps = ws.states[k];
            for (int i = 0; i < g.points(); ++i) {
                ps.p[i] = u[col_p(k, i)];
                ps.q[i] = u[col_q(k, i)];
            }
            eval_pipe_rows(g, opts_, ps, ws.rows[k]);
            const int base = pipe_base_[k];
            for (int s = 0; s < 2 * g.points(); ++s) {
                const LocalRow& lr = ws.rows[k].rows[s];
                if (!lr.differential) continue; // placeholder; bound row fills it
                GlobalRow& gr = out[base + s];
                gr.differential = true;
                gr.mass_n = lr.mass_n;
                for (int j = 0; j < lr.mass_n; ++j) {
                    gr.mass_col[j] = base + lr.mass_col[j];
                    gr.mass_val[j] = lr.mass_val[j];
                }
                gr.value = lr.rhs;
            }
        }
        for (int r = 0; r < total_; ++r) {
            if (!is_bound_[r]) continue;
            const detail::BoundRow& br = bound_rows_[r];
            GlobalRow& gr = out[r];
            gr.differential = false;
            switch (br.kind) {
            case detail::BoundRowKind::pressure_pin:
                gr.value = u[br.col] - node_signal_[br.node].eval(t);
                break;
            case detail::BoundRowKind::pressure_equality:
                gr.value = u[br.col] - u[br.ref_col];
                break;
            case detail::BoundRowKind::flux_balance: {
                double sum = 0.0;
                for (const auto& [col, sign] : br.terms) sum += sign * u[col];
                if (br.node >= 0) sum -= node_signal_[br.node].eval(t);
                gr.value = sum;
                break;
            }
            }
        }
    }

    /// Structural dependency columns per row (superset over all states),
    /// including mass columns; used for Jacobian coloring.
    std::vector<std::vector<int>> row_structure() const {
        std::vector<std::vector<int>> cols(total_);
        for (int k = 0; k < static_cast<int>(net_.pipes().size()); ++k) {
            const auto st = pipe_row_structure(net_.grid(k), opts_);
            const int base = pipe_base_[k];
            for (int s = 0; s < static_cast<int>(st.size()); ++s) {
                if (!st[s].differential) continue;
                for (int c : st[s].cols) cols[base + s].push_back(base + c);
            }
        }
        for (int r = 0; r < total_; ++r) {
            if (!is_bound_[r]) continue;
            const detail::BoundRow& br = bound_rows_[r];
            switch (br.kind) {
            case detail::BoundRowKind::pressure_pin: cols[r] = {br.col}; break;
            case detail::BoundRowKind::pressure_equality: cols[r] = {br.col, br.ref_col}; break;
            case detail::BoundRowKind::flux_balance:
                for (const auto& [col, sign] : br.terms) cols[r].push_back(col);
                break;
            }
        }
        return cols;
    }

    /// Largest algebraic-row residual normalized by the state magnitude,
    /// max_r |A_r(u,t)| / (1 + ||u||_inf); constraint rows are linear in u so
    /// this is the scale-free satisfaction measure.
    double constraint_residual(const Eigen::VectorXd& u, double t, DaeWorkspace& ws) const {
        std::vector<GlobalRow> rows;
        eval(u, t, ws, rows);
        double worst = 0.0;
        for (int r = 0; r < total_; ++r)
            if (!rows[r].differential) worst = std::max(worst, std::abs(rows[r].value));
        return worst / (1.0 + u.cwiseAbs().maxCoeff());
    }

    /// True when explicit stepping applies: one pipe whose two boundary rows
    /// are direct value pins (no junctions anywhere).
    bool explicit_reducible() const {
        if (net_.pipes().size() != 1) return false;
        for (const auto& nd : net_.nodes())
            if (nd.kind == NodeKind::junction) return false;
        return true;
    }

    /// Boundary rows that directly pin one column, u[col] = scale * signal(t):
    /// pressure pins, and single-end flux balances (scale -1 when the pipe
    /// leaves the node, so the signal always means net extraction there).
    std::vector<ValuePin> value_pins() const {
        std::vector<ValuePin> pins;
        for (int r = 0; r < total_; ++r) {
            if (!is_bound_[r]) continue;
            const detail::BoundRow& br = bound_rows_[r];
            if (br.kind == detail::BoundRowKind::pressure_pin)
                pins.push_back({br.col, br.node, 1.0});
            else if (br.kind == detail::BoundRowKind::flux_balance && br.node >= 0 &&
                     br.terms.size() == 1)
                pins.push_back({br.terms[0].first, br.node, br.terms[0].second});
        }
        return pins;
    }

    /// Pressure level of the first pressure boundary at time t (initial-guess
    /// anchor for steady solves).
    double anchor_pressure(double t) const {
        const auto& nodes = net_.nodes();
        for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
            if (nodes[v].kind == NodeKind::pressure_boundary) return node_signal_[v].eval(t);
        throw std::logic_error("anchor_pressure: no pressure boundary"); // validate() excludes this
    }

private:
    int end_p_col(const PipeEnd& e) const {
        return col_p(e.pipe, e.at_outlet ? net_.grid(e.pipe).n : 0);
    }
    int end_q_col(const PipeEnd& e) const {
        return col_q(e.pipe, e.at_outlet ? net_.grid(e.pipe).n : 0);
    }
    /// Global row index of the placeholder owned by this pipe end.
    int placeholder_row(const PipeEnd& e) const {
        return e.at_outlet ? col_q(e.pipe, net_.grid(e.pipe).n) : col_p(e.pipe, 0);
    }

    Network net_;
    SchemeOptions opts_;
    std::vector<Signal> node_signal_;
    std::vector<int> pipe_base_;
    int total_ = 0;
    int n_algebraic_ = 0;
    std::vector<detail::BoundRow> bound_rows_;
    std::vector<char> is_bound_;
};

inline DaeSystem assemble_dae(Network net, const SchemeOptions& opts,
                              std::map<std::string, Signal> signals) {
    return DaeSystem(std::move(net), opts, std::move(signals));
}

/// Explicit stability bound over the whole network: min over pipes.
inline double cfl_dt(const Network& net, const NetState& s) {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < net.grids().size(); ++k)
        dt = std::min(dt, cfl_dt(net.grids()[k], s.pipes[k]));
    return dt;
}

} // namespace gasnet
