#pragma once

// Stand-alone feasibility checker for path schedules. Works directly from the
// path node lists and the link capacities; it does not touch the LP builders.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mmpass/network.hpp"
#include "mmpass/solution.hpp"

namespace mmpass {

struct CertificateCheck {
    std::vector<std::string> violations;
    double rate = 0.0;
    double max_node_usage = 0.0;
    double max_link_excess = 0.0;  // max over links of activation - threshold

    bool ok() const noexcept { return violations.empty(); }
};

/// Verifies path weights x_p >= 0, per-node beam usage (relays <= 1, source
/// and destination <= beams) and, when given, per-link thresholds.
inline CertificateCheck check_path_schedule(const Network& net, const P1Solution& sol,
                                            const std::optional<ThresholdMap>& thresholds = std::nullopt,
                                            int beams = 1, double tol = 1e-7) {
    CertificateCheck out;
    const auto n = static_cast<std::size_t>(net.node_count());
    std::vector<double> tx(n, 0.0), rx(n, 0.0);
    std::vector<double> act(net.link_count(), 0.0);

    for (std::size_t k = 0; k < sol.paths.size(); ++k) {
        const auto& wp = sol.paths[k];
        const auto& nodes = wp.path.nodes;
        const std::string tag = "path " + std::to_string(k) + ": ";
        if (!(wp.x >= -tol)) out.violations.push_back(tag + "negative weight");
        if (nodes.size() < 2 || nodes.front() != net.source() || nodes.back() != net.destination()) {
            out.violations.push_back(tag + "does not join source to destination");
            continue;
        }
        std::vector<char> seen(n, 0);
        double cap = INFINITY;
        std::vector<LinkId> hops;
        bool valid = true;
        for (std::size_t s = 0; s < nodes.size(); ++s) {
            const NodeId v = nodes[s];
            if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
                out.violations.push_back(tag + "repeats or leaves the node range");
                valid = false;
                break;
            }
            seen[static_cast<std::size_t>(v)] = 1;
            if (s + 1 == nodes.size()) break;
            const auto id = net.find_link(v, nodes[s + 1]);
            if (!id) {
                out.violations.push_back(tag + "uses missing link " + std::to_string(v) + "->" +
                                         std::to_string(nodes[s + 1]));
                valid = false;
                break;
            }
            hops.push_back(*id);
            cap = std::fmin(cap, net.link(*id).capacity);
        }
        if (!valid) continue;
        if (std::abs(cap - wp.path.capacity) > 1e-12 * std::fmax(1.0, cap))
            out.violations.push_back(tag + "stored capacity differs from bottleneck");
        out.rate += wp.x * cap;
        if (cap <= 0.0) continue;
        for (LinkId id : hops) {
            const auto& l = net.link(id);
            const double a = wp.x * cap / l.capacity;
            tx[static_cast<std::size_t>(l.tx)] += a;
            rx[static_cast<std::size_t>(l.rx)] += a;
            act[id] += a;
        }
    }

    for (std::size_t v = 0; v < n; ++v) {
        const bool is_src = static_cast<NodeId>(v) == net.source();
        const bool is_dst = static_cast<NodeId>(v) == net.destination();
        const double tx_cap = is_src ? beams : 1.0;
        const double rx_cap = is_dst ? beams : 1.0;
        out.max_node_usage = std::fmax(out.max_node_usage, std::fmax(tx[v], rx[v]));
        if (tx[v] > tx_cap + tol)
            out.violations.push_back("node " + std::to_string(v) + " transmits " + std::to_string(tx[v]) +
                                     " of the time");
        if (rx[v] > rx_cap + tol)
            out.violations.push_back("node " + std::to_string(v) + " receives " + std::to_string(rx[v]) +
                                     " of the time");
    }
    if (thresholds) {
        for (LinkId e = 0; e < net.link_count(); ++e) {
            const double excess = act[e] - (*thresholds)[e];
            out.max_link_excess = std::fmax(out.max_link_excess, excess);
            if (excess > tol)
                out.violations.push_back("link " + std::to_string(net.link(e).tx) + "->" +
                                         std::to_string(net.link(e).rx) + " active " + std::to_string(act[e]) +
                                         " > threshold " + std::to_string((*thresholds)[e]));
        }
    }
    return out;
}

}  // namespace mmpass
