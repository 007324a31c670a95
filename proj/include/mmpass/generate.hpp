#pragma once

// Random network generation: a topology family plus i.i.d. Gaussian link
// capacities clamped below at zero.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmpass/errors.hpp"
#include "mmpass/network.hpp"

namespace mmpass {

struct TopologySpec {
    enum class Kind { layered, complete_dag, parallel_paths };

    Kind kind = Kind::layered;
    int layers = 2;          // layered: number of relay layers
    double edge_prob = 0.5;  // layered: inter-layer link probability
    int fanout = 0;          // layered: source fanout, 0 = width of the first layer
    int paths = 1;           // parallel_paths: number of disjoint chains

    static TopologySpec layered_dag(int layers = 2, double p = 0.5, int fanout = 0) {
        return {Kind::layered, layers, p, fanout, 1};
    }
    static TopologySpec complete() { return {Kind::complete_dag, 2, 0.5, 0, 1}; }
    static TopologySpec parallel(int k) { return {Kind::parallel_paths, 2, 0.5, 0, k}; }
};

inline std::string to_string(const TopologySpec& t) {
    std::ostringstream os;
    switch (t.kind) {
        case TopologySpec::Kind::layered:
            os << "layered(layers=" << t.layers << ",p=" << t.edge_prob << ",fanout=" << t.fanout << ")";
            break;
        case TopologySpec::Kind::complete_dag: os << "complete-dag"; break;
        case TopologySpec::Kind::parallel_paths: os << "parallel-paths(" << t.paths << ")"; break;
    }
    return os.str();
}

/// Parses "layered", "layered(layers=3,p=0.4,fanout=5)", "complete-dag",
/// "parallel-paths(5)" (also "parallel-paths:5").
inline TopologySpec parse_topology(const std::string& text) {
    std::string name = text;
    std::string args;
    if (auto open = text.find_first_of("(:"); open != std::string::npos) {
        name = text.substr(0, open);
        args = text.substr(open + 1);
        if (text[open] == '(') {
            if (args.empty() || args.back() != ')') throw InvalidArgument("topology spec missing ')': " + text);
            args.pop_back();
        }
    }

    auto parse_num = [&](const std::string& v) {
        try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw InvalidArgument("bad number '" + v + "' in topology spec " + text);
        }
    };

    if (name == "complete-dag") {
        if (!args.empty()) throw InvalidArgument("complete-dag takes no arguments");
        return TopologySpec::complete();
    }
    if (name == "parallel-paths") {
        if (args.empty()) throw InvalidArgument("parallel-paths needs a path count, e.g. parallel-paths(5)");
        return TopologySpec::parallel(static_cast<int>(parse_num(args)));
    }
    if (name == "layered") {
        auto spec = TopologySpec::layered_dag();
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw InvalidArgument("expected key=value in topology spec: " + item);
            const auto key = item.substr(0, eq);
            const double v = parse_num(item.substr(eq + 1));
            if (key == "layers")
                spec.layers = static_cast<int>(v);
            else if (key == "p")
                spec.edge_prob = v;
            else if (key == "fanout")
                spec.fanout = static_cast<int>(v);
            else
                throw InvalidArgument("unknown layered parameter '" + key + "'");
        }
        return spec;
    }
    throw InvalidArgument("unknown topology '" + name + "'");
}

struct CapacityDistribution {
    double mean = 1.0;
    double variance = 0.1;
};

namespace detail {

inline std::vector<std::pair<NodeId, NodeId>> layered_edges(int n, const TopologySpec& spec, std::mt19937_64& rng) {
    if (spec.layers < 1) throw InvalidArgument("layered topology needs layers >= 1");
    if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) throw InvalidArgument("edge probability outside [0,1]");
    const NodeId dst = n + 1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    if (n == 0) {
        edges.emplace_back(0, dst);
        return edges;
    }

    const int layers = std::min(spec.layers, n);
    std::vector<std::vector<NodeId>> layer(static_cast<std::size_t>(layers));
    NodeId next = 1;
    for (int l = 0; l < layers; ++l) {
        const int size = n / layers + (l < n % layers ? 1 : 0);
        for (int k = 0; k < size; ++k) layer[static_cast<std::size_t>(l)].push_back(next++);
    }

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto pick = [&](const std::vector<NodeId>& from) {
        std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
        return from[d(rng)];
    };

    const auto& first = layer.front();
    const int width = static_cast<int>(first.size());
    const int fanout = spec.fanout <= 0 ? width : std::min(spec.fanout, width);
    std::vector<NodeId> fed = first;
    std::shuffle(fed.begin(), fed.end(), rng);
    fed.resize(static_cast<std::size_t>(fanout));
    std::sort(fed.begin(), fed.end());
    for (NodeId v : fed) edges.emplace_back(0, v);

    for (std::size_t l = 0; l + 1 < layer.size(); ++l) {
        const auto& a = layer[l];
        const auto& b = layer[l + 1];
        std::vector<std::vector<char>> adj(a.size(), std::vector<char>(b.size(), 0));
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) adj[i][j] = coin(rng) < spec.edge_prob;
        for (std::size_t j = 0; j < b.size(); ++j) {
            bool any = false;
            for (std::size_t i = 0; i < a.size(); ++i) any = any || adj[i][j];
            if (!any) adj[static_cast<std::size_t>(pick(a) - a.front())][j] = 1;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            bool any = false;
            for (std::size_t j = 0; j < b.size(); ++j) any = any || adj[i][j];
            if (!any) adj[i][static_cast<std::size_t>(pick(b) - b.front())] = 1;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (adj[i][j]) edges.emplace_back(a[i], b[j]);
    }
    for (NodeId v : layer.back()) edges.emplace_back(v, dst);
    return edges;
}

inline std::vector<std::pair<NodeId, NodeId>> topology_edges(int n, const TopologySpec& spec, std::mt19937_64& rng) {
    const NodeId dst = n + 1;
    std::vector<std::pair<NodeId, NodeId>> edges;
    switch (spec.kind) {
        case TopologySpec::Kind::layered: edges = layered_edges(n, spec, rng); break;
        case TopologySpec::Kind::complete_dag:
            for (NodeId i = 0; i <= n; ++i)
                for (NodeId j = i + 1; j <= dst; ++j) edges.emplace_back(i, j);
            break;
        case TopologySpec::Kind::parallel_paths: {
            const int k = spec.paths;
            if (k < 1) throw InvalidArgument("parallel-paths needs at least one path");
            if (n == 0 && k == 1) {
                edges.emplace_back(0, dst);
                break;
            }
            if (n < k)
                throw InvalidArgument("parallel-paths(" + std::to_string(k) + ") needs at least " +
                                      std::to_string(k) + " relays, got " + std::to_string(n));
            NodeId next = 1;
            for (int c = 0; c < k; ++c) {
                const int len = n / k + (c < n % k ? 1 : 0);
                NodeId prev = 0;
                for (int s = 0; s < len; ++s) {
                    edges.emplace_back(prev, next);
                    prev = next++;
                }
                edges.emplace_back(prev, dst);
            }
            break;
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

inline double draw_capacity(const CapacityDistribution& dist, std::mt19937_64& rng) {
    if (dist.variance == 0.0) return std::max(0.0, dist.mean);
    std::normal_distribution<double> normal(dist.mean, std::sqrt(dist.variance));
    return std::max(0.0, normal(rng));
}

inline void check_distribution(const CapacityDistribution& dist) {
    if (!std::isfinite(dist.mean)) throw InvalidArgument("capacity mean must be finite");
    if (!std::isfinite(dist.variance) || dist.variance < 0.0)
        throw InvalidArgument("capacity variance must be finite and >= 0");
}

}  // namespace detail

/// Redraws every link capacity of a fixed topology from the given seed.
inline Network draw_capacities(const Network& topology, const CapacityDistribution& dist, std::uint64_t seed) {
    detail::check_distribution(dist);
    std::mt19937_64 rng(seed);
    std::vector<double> caps(topology.link_count());
    for (auto& c : caps) c = detail::draw_capacity(dist, rng);
    return topology.with_capacities(caps);
}

/// Deterministic random network: topology and capacities both derive from seed.
inline Network generate_random(int n_relays, const TopologySpec& spec, const CapacityDistribution& dist,
                               std::uint64_t seed, int m_beams = 1) {
    if (n_relays < 0) throw InvalidArgument("n_relays must be >= 0");
    detail::check_distribution(dist);
    std::mt19937_64 rng(seed);
    const auto edges = detail::topology_edges(n_relays, spec, rng);
    std::vector<Link> links;
    links.reserve(edges.size());
    for (const auto& [tx, rx] : edges) links.push_back({tx, rx, detail::draw_capacity(dist, rng)});
    return Network(n_relays, m_beams, std::move(links));
}

}  // namespace mmpass
