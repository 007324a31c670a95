#pragma once

// Beam schedules: time-shares of network states, where a state is a set of
// links that may be beam-aligned simultaneously.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mmpass/errors.hpp"
#include "mmpass/lp.hpp"
#include "mmpass/network.hpp"
#include "mmpass/paths.hpp"

namespace mmpass {

struct Edge {
    NodeId tx = 0;
    NodeId rx = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Links active at the same instant. Relays use at most one transmit and one
/// receive beam; the source and destination at most `beams` each.
struct NetworkState {
    std::vector<Edge> links;  // sorted

    friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

struct TimedState {
    NetworkState state;
    double duration = 0.0;
};

struct BeamSchedule {
    std::vector<TimedState> states;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : states) t += s.duration;
        return t;
    }

    /// Summed duration per network link (aligned with net.links()). Throws if
    /// a state names a link the network does not have.
    std::vector<double> link_activations(const Network& net) const {
        std::vector<double> act(net.link_count(), 0.0);
        for (const auto& s : states)
            for (const auto& e : s.state.links) {
                const auto id = net.find_link(e.tx, e.rx);
                if (!id)
                    throw InvalidArgument("schedule uses missing link " + std::to_string(e.tx) + "->" +
                                          std::to_string(e.rx));
                act[*id] += s.duration;
            }
        return act;
    }
};

/// Lists beam-limit violations of a single state.
inline std::vector<std::string> check_state(const Network& net, const NetworkState& state, int beams) {
    std::vector<std::string> errs;
    const auto n = static_cast<std::size_t>(net.node_count());
    std::vector<int> tx(n, 0), rx(n, 0);
    for (std::size_t k = 0; k < state.links.size(); ++k) {
        const auto& e = state.links[k];
        const std::string tag = std::to_string(e.tx) + "->" + std::to_string(e.rx);
        if (!net.find_link(e.tx, e.rx)) {
            errs.push_back("link " + tag + " is not in the network");
            continue;
        }
        if (k > 0 && state.links[k - 1] == e) errs.push_back("link " + tag + " listed twice");
        ++tx[static_cast<std::size_t>(e.tx)];
        ++rx[static_cast<std::size_t>(e.rx)];
    }
    for (std::size_t v = 0; v < n; ++v) {
        const int tx_cap = static_cast<NodeId>(v) == net.source() ? beams : 1;
        const int rx_cap = static_cast<NodeId>(v) == net.destination() ? beams : 1;
        if (tx[v] > tx_cap)
            errs.push_back("node " + std::to_string(v) + " transmits on " + std::to_string(tx[v]) + " links");
        if (rx[v] > rx_cap)
            errs.push_back("node " + std::to_string(v) + " receives on " + std::to_string(rx[v]) + " links");
    }
    return errs;
}

namespace detail {

// Kuhn's augmenting-path matching over a dense support mask.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t n, const std::vector<char>& support) : n_(n), support_(support) {}

    // Perfect matching; left vertex `fixed_left` is pinned to `fixed_right`
    // unless fixed_left == n. Returns match_of_left or an empty vector.
    std::vector<std::size_t> perfect(std::size_t fixed_left, std::size_t fixed_right) {
        right_owner_.assign(n_, n_);
        if (fixed_left < n_) right_owner_[fixed_right] = fixed_left;
        for (std::size_t u = 0; u < n_; ++u) {
            if (u == fixed_left) continue;
            seen_.assign(n_, 0);
            if (!augment(u, fixed_right, fixed_left < n_)) return {};
        }
        std::vector<std::size_t> match(n_, n_);
        for (std::size_t v = 0; v < n_; ++v) match[right_owner_[v]] = v;
        return match;
    }

private:
    bool augment(std::size_t u, std::size_t locked, bool has_lock) {
        for (std::size_t v = 0; v < n_; ++v) {
            if (!support_[u * n_ + v] || seen_[v] || (has_lock && v == locked)) continue;
            seen_[v] = 1;
            if (right_owner_[v] == n_ || augment(right_owner_[v], locked, has_lock)) {
                right_owner_[v] = u;
                return true;
            }
        }
        return false;
    }

    std::size_t n_;
    const std::vector<char>& support_;
    std::vector<std::size_t> right_owner_;
    std::vector<char> seen_;
};

// Re-solves the state weights as a vertex of
//   min sum t_k  s.t.  sum_{k covering e} t_k = lambda_e,  t >= 0
// which leaves at most one positive weight per active link.
inline std::vector<TimedState> reduce_states(const Network& net, const std::vector<double>& target,
                                             std::vector<TimedState> states) {
    LpProblem lp;
    for (std::size_t k = 0; k < states.size(); ++k) lp.add_variable("t" + std::to_string(k), -1.0);
    for (LinkId e = 0; e < net.link_count(); ++e) {
        if (target[e] <= 0.0) continue;
        auto& row = lp.add_constraint("", Relation::equal, target[e]);
        const Edge edge{net.link(e).tx, net.link(e).rx};
        for (std::size_t k = 0; k < states.size(); ++k) {
            const auto& ls = states[k].state.links;
            if (std::binary_search(ls.begin(), ls.end(), edge)) row.coeffs[k] = 1.0;
        }
    }
    const auto sol = solve(lp);
    if (!sol.optimal()) return states;
    std::vector<TimedState> out;
    for (std::size_t k = 0; k < states.size(); ++k)
        if (sol.point[k] > 1e-12) out.push_back({states[k].state, sol.point[k]});
    return out;
}

}  // namespace detail

/// Realizes a link activation profile as an explicit beam schedule (M = 1).
///
/// The transmitter-by-receiver activation matrix is doubly substochastic. It
/// is padded to a doubly stochastic matrix [[A, diag(row slack)],
/// [diag(col slack), A^T]] and peeled one perfect matching at a time: each
/// step takes a matching through the largest remaining link activation and
/// runs it for the smallest remaining entry it covers. Slack entries are
/// stripped from the emitted states. Residue below 1e-9 is discarded.
inline BeamSchedule schedule_from_activations(const Network& net, std::span<const double> activations) {
    constexpr double kDust = 1e-9;
    if (net.m_beams() != 1) throw InvalidArgument("activation scheduling is defined for M=1");
    if (activations.size() != net.link_count()) throw InvalidArgument("activation vector does not match network");

    const auto k = static_cast<std::size_t>(net.n_relays() + 1);  // transmitters 0..N, receivers 1..N+1
    std::vector<double> a(k * k, 0.0);
    std::vector<double> row(k, 0.0), col(k, 0.0);
    std::vector<std::string> errs;
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const double v = activations[e];
        const auto& l = net.link(e);
        if (!std::isfinite(v) || v < -kFeasTol) {
            errs.push_back("negative activation on link " + std::to_string(l.tx) + "->" + std::to_string(l.rx));
            continue;
        }
        if (v <= kDust) continue;
        const auto r = static_cast<std::size_t>(l.tx), c = static_cast<std::size_t>(l.rx - 1);
        a[r * k + c] += v;
        row[r] += v;
        col[c] += v;
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (row[i] > 1.0 + kFeasTol)
            errs.push_back("node " + std::to_string(i) + " transmits " + std::to_string(row[i]) + " > 1");
        if (col[i] > 1.0 + kFeasTol)
            errs.push_back("node " + std::to_string(i + 1) + " receives " + std::to_string(col[i]) + " > 1");
    }
    if (!errs.empty()) throw InvalidArgument("infeasible activations: " + errs.front());

    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) total = std::max({total, row[i], col[i]});
    std::vector<double> slack_r(k), slack_c(k);
    for (std::size_t i = 0; i < k; ++i) {
        slack_r[i] = total - row[i];
        slack_c[i] = total - col[i];
    }

    const std::size_t n2 = 2 * k;
    std::map<std::vector<Edge>, double> emitted;
    std::vector<char> support(n2 * n2, 0);
    for (std::size_t guard = 0; guard < 4 * (k * k + n2) + 16; ++guard) {
        std::size_t best = k * k;
        for (std::size_t i = 0; i < k * k; ++i)
            if (a[i] > kDust && (best == k * k || a[i] > a[best])) best = i;
        if (best == k * k) break;

        // Left: rows 0..k-1 then column mirrors; right: columns 0..k-1 then row mirrors.
        std::fill(support.begin(), support.end(), 0);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c)
                if (a[r * k + c] > kDust) {
                    support[r * n2 + c] = 1;
                    support[(k + c) * n2 + (k + r)] = 1;
                }
        for (std::size_t i = 0; i < k; ++i) {
            if (slack_r[i] > kDust) support[i * n2 + (k + i)] = 1;
            if (slack_c[i] > kDust) support[(k + i) * n2 + i] = 1;
        }

        detail::BipartiteMatcher matcher(n2, support);
        const std::size_t br = best / k, bc = best % k;
        auto match = matcher.perfect(br, bc);
        if (match.empty()) match = matcher.perfect(n2, n2);

        std::vector<char> row_used(k, 0), col_used(k, 0);
        std::vector<std::size_t> picked;
        if (!match.empty()) {
            for (std::size_t r = 0; r < k; ++r)
                if (match[r] < k) picked.push_back(r * k + match[r]);
        } else {
            // Numerical fallback: greedy matching through the largest entry.
            std::vector<std::size_t> order(k * k);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a[x] > a[y]; });
            for (auto i : order)
                if (a[i] > kDust && !row_used[i / k] && !col_used[i % k]) {
                    row_used[i / k] = col_used[i % k] = 1;
                    picked.push_back(i);
                }
            std::fill(row_used.begin(), row_used.end(), 0);
            std::fill(col_used.begin(), col_used.end(), 0);
        }
        for (auto i : picked) {
            row_used[i / k] = 1;
            col_used[i % k] = 1;
        }

        double t = INFINITY;
        for (auto i : picked) t = std::min(t, a[i]);
        if (!match.empty()) {
            for (std::size_t i = 0; i < k; ++i) {
                if (!row_used[i]) t = std::min(t, slack_r[i]);
                if (!col_used[i]) t = std::min(t, slack_c[i]);
            }
        }
        if (!(t > 0.0)) break;

        std::vector<Edge> links;
        for (auto i : picked) {
            a[i] -= t;
            if (a[i] <= kDust) a[i] = 0.0;
            links.push_back({static_cast<NodeId>(i / k), static_cast<NodeId>(i % k + 1)});
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (!row_used[i]) slack_r[i] = std::max(0.0, slack_r[i] - t);
            if (!col_used[i]) slack_c[i] = std::max(0.0, slack_c[i] - t);
        }
        std::sort(links.begin(), links.end());
        emitted[links] += t;
    }

    std::vector<TimedState> states;
    for (auto& [links, d] : emitted) states.push_back({NetworkState{links}, d});

    std::vector<double> target(net.link_count(), 0.0);
    std::size_t active = 0;
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (activations[e] > kDust) {
            target[e] = activations[e];
            ++active;
        }
    if (states.size() > active + 1) states = detail::reduce_states(net, target, std::move(states));

    BeamSchedule out{std::move(states)};
    const auto replay = out.link_activations(net);
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (std::abs(replay[e] - target[e]) > kFeasTol)
            throw SolverError("schedule replay deviates from activations on link " + std::to_string(e));
    return out;
}

inline BeamSchedule schedule_from_activations(const Network& net, const std::vector<double>& activations) {
    return schedule_from_activations(net, std::span<const double>(activations));
}

inline NetworkState state_of_paths(const std::vector<const Path*>& paths, const Network& net) {
    NetworkState s;
    for (const auto* p : paths)
        for (LinkId id : p->links) s.links.push_back({net.link(id).tx, net.link(id).rx});
    std::sort(s.links.begin(), s.links.end());
    return s;
}

struct EdgeDisjointSchedule {
    BeamSchedule schedule;
    double gamma = 0.0;  // time each path is operated
    double rate = 0.0;
    bool meets_threshold = true;
};

/// Equal time-sharing over edge-disjoint unit-capacity paths, each operated for
/// gamma = theta_c * cbar / H_e. meets_threshold reports gamma <= theta; the
/// schedule is returned either way.
inline EdgeDisjointSchedule edge_disjoint_schedule(const DisjointPathCertificate& cert, const Network& net,
                                                   double theta_c, double cbar, double theta) {
    if (cert.kind != DisjointPathCertificate::Kind::edge) throw InvalidArgument("expected an edge-disjoint certificate");
    if (cert.count == 0 || cert.witness.empty()) throw InvalidArgument("empty disjoint-path certificate");
    if (!(theta_c >= 0.0 && theta_c <= 1.0)) throw InvalidArgument("theta_c must lie in [0,1]");

    EdgeDisjointSchedule out;
    const double h = cert.count;
    out.gamma = theta_c * cbar / h;
    out.meets_threshold = out.gamma <= theta + 1e-12;
    if (out.gamma <= 0.0) return out;
    for (const auto& p : cert.witness) {
        out.schedule.states.push_back({state_of_paths({&p}, net), out.gamma});
        out.rate += out.gamma * p.capacity;
    }
    return out;
}

struct VertexDisjointSchedule {
    BeamSchedule schedule;
    double cbar = 0.0;            // min(M, H_v)
    double gamma = 0.0;           // per-path activation
    double state_duration = 0.0;  // gamma / M
    std::size_t state_count = 0;  // max(M, H_v)
    double rate = 0.0;
};

/// Multi-beam construction over vertex-disjoint unit-capacity paths:
/// max(M, H_v) states of duration gamma / M, each running min(M, H_v) paths
/// round-robin so that every path appears in exactly M states.
inline VertexDisjointSchedule vertex_disjoint_schedule(const DisjointPathCertificate& cert, const Network& net,
                                                       int beams, double theta_c) {
    if (cert.kind != DisjointPathCertificate::Kind::vertex)
        throw InvalidArgument("expected a vertex-disjoint certificate");
    if (beams <= 1) throw InvalidArgument("the multi-beam construction needs M > 1");
    if (cert.count == 0 || cert.witness.empty()) throw InvalidArgument("empty disjoint-path certificate");
    if (!(theta_c >= 0.0 && theta_c <= 1.0)) throw InvalidArgument("theta_c must lie in [0,1]");

    const auto h = static_cast<std::size_t>(cert.count);
    const auto m = static_cast<std::size_t>(beams);
    const std::size_t active = std::min(m, h);

    VertexDisjointSchedule out;
    out.cbar = static_cast<double>(active);
    out.gamma = theta_c * out.cbar / static_cast<double>(h);
    out.state_duration = out.gamma / static_cast<double>(m);
    out.state_count = std::max(m, h);
    if (theta_c <= 0.0) {
        out.state_count = 0;
        return out;
    }
    for (std::size_t s = 0; s < out.state_count; ++s) {
        std::vector<const Path*> members;
        for (std::size_t j = 0; j < active; ++j) members.push_back(&cert.witness[(s + j) % h]);
        out.schedule.states.push_back({state_of_paths(members, net), out.state_duration});
        for (const auto* p : members) out.rate += out.state_duration * p->capacity;
    }
    return out;
}

/// Largest end-to-end rate the schedule supports: a max-flow with link
/// capacity activation * ell.
inline double schedule_rate(const Network& net, const BeamSchedule& schedule) {
    const auto act = schedule.link_activations(net);
    LpProblem lp;
    std::vector<std::size_t> col(net.link_count());
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const auto& l = net.link(e);
        col[e] = lp.add_variable("F" + std::to_string(e), l.rx == net.destination() ? 1.0 : 0.0, 0.0,
                                 std::max(0.0, act[e] * l.capacity));
    }
    for (NodeId i = 1; i <= net.n_relays(); ++i) {
        auto& row = lp.add_constraint("flow_" + std::to_string(i), Relation::equal, 0.0);
        for (LinkId e : net.in_links(i)) row.coeffs[col[e]] += 1.0;
        for (LinkId e : net.out_links(i)) row.coeffs[col[e]] -= 1.0;
    }
    const auto sol = solve(lp);
    if (!sol.optimal()) throw SolverError("schedule max-flow did not solve");
    return sol.value;
}

// Schedule dump: [ {"duration": float, "links": [[tx, rx], ...]}, ... ]

inline std::string save_schedule(const BeamSchedule& s, int indent = 2) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& ts : s.states) {
        nlohmann::json links = nlohmann::json::array();
        for (const auto& e : ts.state.links) links.push_back({e.tx, e.rx});
        out.push_back({{"duration", ts.duration}, {"links", std::move(links)}});
    }
    return out.dump(indent) + "\n";
}

inline BeamSchedule load_schedule(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_array()) throw ParseError("schedule root: expected array");
    BeamSchedule out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& st = doc[i];
        const std::string where = "states[" + std::to_string(i) + "]";
        if (!st.is_object()) throw ParseError(where + ": expected object");
        auto d = st.find("duration");
        if (d == st.end() || !d->is_number()) throw ParseError(where + ".duration: expected number");
        auto ls = st.find("links");
        if (ls == st.end() || !ls->is_array()) throw ParseError(where + ".links: expected array");
        TimedState ts;
        ts.duration = d->get<double>();
        for (std::size_t j = 0; j < ls->size(); ++j) {
            const auto& pr = (*ls)[j];
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
                throw ParseError(where + ".links[" + std::to_string(j) + "]: expected [tx, rx]");
            ts.state.links.push_back({pr[0].get<NodeId>(), pr[1].get<NodeId>()});
        }
        std::sort(ts.state.links.begin(), ts.state.links.end());
        out.states.push_back(std::move(ts));
    }
    return out;
}

}  // namespace mmpass
