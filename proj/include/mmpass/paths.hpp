#pragma once

// Path enumeration, flow decomposition and disjoint-path counting.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <vector>

#include "mmpass/errors.hpp"
#include "mmpass/lp.hpp"
#include "mmpass/network.hpp"
#include "mmpass/solution.hpp"

namespace mmpass {

/// All simple source-to-destination paths, in lexicographic node order.
/// Throws PathOverflow when more than limit paths exist.
inline PathSet enumerate_paths(const Network& net, std::size_t limit) {
    if (limit < 1) throw InvalidArgument("path limit must be >= 1");
    PathSet out;
    const NodeId dst = net.destination();
    std::vector<char> on_path(static_cast<std::size_t>(net.node_count()), 0);
    std::vector<NodeId> nodes{net.source()};
    on_path[0] = 1;

    // Explicit stack of (node, next out-link position).
    std::vector<std::size_t> cursor{0};
    while (!cursor.empty()) {
        const NodeId u = nodes.back();
        const auto outs = net.out_links(u);
        if (u == dst || cursor.back() >= outs.size()) {
            if (u == dst) {
                if (out.paths.size() == limit) throw PathOverflow(limit);
                out.paths.push_back(make_path(net, nodes));
            }
            on_path[static_cast<std::size_t>(u)] = 0;
            nodes.pop_back();
            cursor.pop_back();
            continue;
        }
        const NodeId v = net.link(outs[cursor.back()++]).rx;
        if (on_path[static_cast<std::size_t>(v)]) continue;
        on_path[static_cast<std::size_t>(v)] = 1;
        nodes.push_back(v);
        cursor.push_back(0);
    }
    out.complete = true;
    return out;
}

/// Splits a link flow into weighted paths.
///
/// Flow circulating on cycles is cancelled first; it carries nothing to the
/// destination. The remaining acyclic flow is peeled one path at a time,
/// always taking the path with the widest bottleneck (ties: lexicographically
/// smallest node sequence). A path carrying flow F_p gets weight F_p / C_p.
inline P1Solution decompose_flow(const P2Solution& sol, const Network& net) {
    const auto L = net.link_count();
    if (sol.flows.size() != L) throw InvalidArgument("flow vector does not match network");
    std::vector<double> f(L, 0.0);
    double scale = 1.0;
    for (LinkId e = 0; e < L; ++e) {
        f[e] = net.link(e).capacity > 0.0 ? std::max(0.0, sol.flows[e]) : 0.0;
        scale = std::max(scale, f[e]);
    }
    const double dust = 1e-12 * scale;
    for (auto& v : f)
        if (v <= dust) v = 0.0;

    for (NodeId i = 1; i <= net.n_relays(); ++i) {
        double bal = 0.0;
        for (LinkId e : net.in_links(i)) bal += f[e];
        for (LinkId e : net.out_links(i)) bal -= f[e];
        if (std::abs(bal) > kFeasTol * scale)
            throw InvalidArgument("flow conservation violated at relay " + std::to_string(i) + " by " +
                                  std::to_string(bal));
    }

    const auto n = static_cast<std::size_t>(net.node_count());

    // Cycle cancellation.
    for (;;) {
        std::vector<int> color(n, 0);
        std::vector<LinkId> via(n, 0);
        std::vector<LinkId> cycle;
        std::vector<std::pair<NodeId, std::size_t>> stack;
        for (NodeId s = 0; s < static_cast<NodeId>(n) && cycle.empty(); ++s) {
            if (color[static_cast<std::size_t>(s)]) continue;
            stack.assign(1, {s, 0});
            color[static_cast<std::size_t>(s)] = 1;
            while (!stack.empty() && cycle.empty()) {
                auto& [u, pos] = stack.back();
                const auto outs = net.out_links(u);
                if (pos >= outs.size()) {
                    color[static_cast<std::size_t>(u)] = 2;
                    stack.pop_back();
                    continue;
                }
                const LinkId e = outs[pos++];
                if (f[e] <= 0.0) continue;
                const NodeId v = net.link(e).rx;
                const auto vi = static_cast<std::size_t>(v);
                if (color[vi] == 1) {
                    cycle.push_back(e);
                    for (NodeId w = u; w != v; w = net.link(via[static_cast<std::size_t>(w)]).tx)
                        cycle.push_back(via[static_cast<std::size_t>(w)]);
                } else if (color[vi] == 0) {
                    color[vi] = 1;
                    via[vi] = e;
                    stack.push_back({v, 0});
                }
            }
        }
        if (cycle.empty()) break;
        double b = std::numeric_limits<double>::infinity();
        for (LinkId e : cycle) b = std::min(b, f[e]);
        for (LinkId e : cycle) {
            f[e] -= b;
            if (f[e] <= dust) f[e] = 0.0;
        }
    }

    const NodeId src = net.source();
    const NodeId dst = net.destination();
    std::map<std::vector<NodeId>, WeightedPath> found;
    for (std::size_t guard = 0; guard <= L + 1; ++guard) {
        // Widest-path bottleneck values (max-min label setting).
        std::vector<double> width(n, 0.0);
        std::vector<char> done(n, 0);
        width[static_cast<std::size_t>(src)] = std::numeric_limits<double>::infinity();
        for (;;) {
            std::size_t u = n;
            for (std::size_t k = 0; k < n; ++k)
                if (!done[k] && width[k] > 0.0 && (u == n || width[k] > width[u])) u = k;
            if (u == n) break;
            done[u] = 1;
            for (LinkId e : net.out_links(static_cast<NodeId>(u))) {
                const auto v = static_cast<std::size_t>(net.link(e).rx);
                width[v] = std::max(width[v], std::min(width[u], f[e]));
            }
        }
        const double b = width[static_cast<std::size_t>(dst)];
        if (!(b > 0.0)) break;

        // Nodes that reach the destination over links carrying >= b.
        std::vector<char> reach(n, 0);
        reach[static_cast<std::size_t>(dst)] = 1;
        std::vector<NodeId> queue{dst};
        while (!queue.empty()) {
            const NodeId v = queue.back();
            queue.pop_back();
            for (LinkId e : net.in_links(v)) {
                const auto u = static_cast<std::size_t>(net.link(e).tx);
                if (f[e] >= b && !reach[u]) {
                    reach[u] = 1;
                    queue.push_back(static_cast<NodeId>(u));
                }
            }
        }

        std::vector<NodeId> nodes{src};
        std::vector<LinkId> links;
        while (nodes.back() != dst) {
            bool moved = false;
            for (LinkId e : net.out_links(nodes.back())) {
                const NodeId v = net.link(e).rx;
                if (f[e] >= b && reach[static_cast<std::size_t>(v)]) {
                    nodes.push_back(v);
                    links.push_back(e);
                    moved = true;
                    break;
                }
            }
            if (!moved) throw SolverError("flow decomposition lost its path");
        }
        for (LinkId e : links) {
            f[e] -= b;
            if (f[e] <= dust) f[e] = 0.0;
        }
        auto path = make_path(net, nodes);
        auto [it, fresh] = found.try_emplace(nodes, WeightedPath{path, 0.0});
        it->second.x += b / path.capacity;
    }

    P1Solution out;
    for (auto& [key, wp] : found) out.paths.push_back(std::move(wp));
    return out;
}

struct DisjointPathCertificate {
    enum class Kind { edge, vertex };
    Kind kind = Kind::edge;
    int count = 0;
    std::vector<Path> witness;
};

namespace detail {

// Edmonds-Karp on small integer capacities.
class MaxFlow {
public:
    explicit MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

    std::size_t add_edge(int u, int v, int cap) {
        const std::size_t id = to_.size();
        to_.push_back(v);
        cap_.push_back(cap);
        adj_[static_cast<std::size_t>(u)].push_back(id);
        to_.push_back(u);
        cap_.push_back(0);
        adj_[static_cast<std::size_t>(v)].push_back(id + 1);
        return id;
    }

    int run(int s, int t) {
        int total = 0;
        const auto n = adj_.size();
        for (;;) {
            std::vector<long> parent(n, -1);
            parent[static_cast<std::size_t>(s)] = -2;
            std::queue<int> q;
            q.push(s);
            while (!q.empty() && parent[static_cast<std::size_t>(t)] == -1) {
                const int u = q.front();
                q.pop();
                for (auto id : adj_[static_cast<std::size_t>(u)]) {
                    const auto v = static_cast<std::size_t>(to_[id]);
                    if (cap_[id] > 0 && parent[v] == -1) {
                        parent[v] = static_cast<long>(id);
                        q.push(to_[id]);
                    }
                }
            }
            if (parent[static_cast<std::size_t>(t)] == -1) return total;
            for (int v = t; v != s;) {
                const auto id = static_cast<std::size_t>(parent[static_cast<std::size_t>(v)]);
                cap_[id] -= 1;
                cap_[id ^ 1U] += 1;
                v = to_[id ^ 1U];
            }
            ++total;
        }
    }

    /// Units of flow pushed through forward edge id.
    int flow(std::size_t id) const { return cap_[id ^ 1U]; }

private:
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<int> to_;
    std::vector<int> cap_;
};

// Turns an integral link flow into paths (smallest next node first),
// discarding any circulation met along the way.
inline std::vector<Path> integral_paths(const Network& net, std::vector<int> flow) {
    std::vector<Path> out;
    const NodeId src = net.source(), dst = net.destination();
    for (;;) {
        bool any = false;
        for (LinkId e : net.out_links(src)) any = any || flow[e] > 0;
        if (!any) break;
        std::vector<NodeId> nodes{src};
        std::vector<LinkId> links;
        std::vector<long> pos(static_cast<std::size_t>(net.node_count()), -1);
        pos[static_cast<std::size_t>(src)] = 0;
        while (nodes.back() != dst) {
            LinkId next = net.link_count();
            for (LinkId e : net.out_links(nodes.back()))
                if (flow[e] > 0) {
                    next = e;
                    break;
                }
            if (next == net.link_count()) throw SolverError("integral flow is not conserved");
            const NodeId v = net.link(next).rx;
            const long at = pos[static_cast<std::size_t>(v)];
            if (at >= 0) {
                flow[next] -= 1;
                for (auto k = static_cast<std::size_t>(at); k < links.size(); ++k) flow[links[k]] -= 1;
                for (auto k = static_cast<std::size_t>(at) + 1; k < nodes.size(); ++k)
                    pos[static_cast<std::size_t>(nodes[k])] = -1;
                nodes.resize(static_cast<std::size_t>(at) + 1);
                links.resize(static_cast<std::size_t>(at));
                continue;
            }
            pos[static_cast<std::size_t>(v)] = static_cast<long>(nodes.size());
            nodes.push_back(v);
            links.push_back(next);
        }
        for (LinkId e : links) flow[e] -= 1;
        out.push_back(make_path(net, nodes));
    }
    return out;
}

}  // namespace detail

/// Maximum number of link-disjoint source-destination paths with a witness
/// family. Zero-capacity links are treated as absent.
inline DisjointPathCertificate count_edge_disjoint(const Network& net) {
    detail::MaxFlow mf(net.node_count());
    std::vector<std::size_t> edge_id(net.link_count(), 0);
    std::vector<char> used(net.link_count(), 0);
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const auto& l = net.link(e);
        if (l.capacity <= 0.0 || net.find_link(l.tx, l.rx) != e) continue;
        edge_id[e] = mf.add_edge(l.tx, l.rx, 1);
        used[e] = 1;
    }
    DisjointPathCertificate cert;
    cert.kind = DisjointPathCertificate::Kind::edge;
    cert.count = mf.run(net.source(), net.destination());
    std::vector<int> flow(net.link_count(), 0);
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (used[e]) flow[e] = mf.flow(edge_id[e]);
    cert.witness = detail::integral_paths(net, std::move(flow));
    return cert;
}

/// Maximum number of source-destination paths sharing no relay (and hence no
/// link), via node splitting. Zero-capacity links are treated as absent.
inline DisjointPathCertificate count_vertex_disjoint(const Network& net) {
    const int n = net.node_count();
    detail::MaxFlow mf(2 * n);
    const int big = static_cast<int>(net.link_count()) + 1;
    for (NodeId v = 0; v < n; ++v) {
        const bool endpoint = v == net.source() || v == net.destination();
        mf.add_edge(2 * v, 2 * v + 1, endpoint ? big : 1);
    }
    std::vector<std::size_t> edge_id(net.link_count(), 0);
    std::vector<char> used(net.link_count(), 0);
    for (LinkId e = 0; e < net.link_count(); ++e) {
        const auto& l = net.link(e);
        if (l.capacity <= 0.0 || net.find_link(l.tx, l.rx) != e) continue;
        edge_id[e] = mf.add_edge(2 * l.tx + 1, 2 * l.rx, 1);
        used[e] = 1;
    }
    DisjointPathCertificate cert;
    cert.kind = DisjointPathCertificate::Kind::vertex;
    cert.count = mf.run(2 * net.source() + 1, 2 * net.destination());
    std::vector<int> flow(net.link_count(), 0);
    for (LinkId e = 0; e < net.link_count(); ++e)
        if (used[e]) flow[e] = mf.flow(edge_id[e]);
    cert.witness = detail::integral_paths(net, std::move(flow));
    return cert;
}

/// Edge-disjoint path count of the subgraph of links the solution activates.
inline int active_edge_disjoint(const P2Solution& sol, const Network& net) {
    if (sol.activations.size() != net.link_count()) throw InvalidArgument("activation vector does not match network");
    const auto sub = net.filter_links([&](LinkId e) { return sol.activations[e] > kFeasTol; });
    return count_edge_disjoint(sub).count;
}

}  // namespace mmpass
