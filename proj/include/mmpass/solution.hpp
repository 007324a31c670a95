#pragma once

#include <cstddef>
#include <vector>

#include "mmpass/network.hpp"

namespace mmpass {

/// Source-to-destination paths. complete is set when the list is exhaustive.
struct PathSet {
    std::vector<Path> paths;
    bool complete = false;

    std::size_t size() const noexcept { return paths.size(); }
};

/// Link-level solution of the edge-based formulation. Vectors are aligned with
/// Network::links(); zero-capacity links always carry zero.
struct P2Solution {
    std::vector<double> flows;
    std::vector<double> activations;
    double rate = 0.0;
};

struct WeightedPath {
    Path path;
    double x = 0.0;  // fraction of time the path is operated
};

/// Path-level solution: each path p runs for x_p of the time at rate C_p.
struct P1Solution {
    std::vector<WeightedPath> paths;

    double rate() const {
        double r = 0.0;
        for (const auto& wp : paths) r += wp.x * wp.path.capacity;
        return r;
    }

    /// Per-link activation implied by the path weights: sum of x_p * C_p / ell.
    std::vector<double> link_activations(const Network& net) const {
        std::vector<double> act(net.link_count(), 0.0);
        for (const auto& wp : paths)
            for (LinkId id : wp.path.links) {
                const double ell = net.link(id).capacity;
                if (ell > 0.0) act[id] += wp.x * wp.path.capacity / ell;
            }
        return act;
    }

    P1Solution scaled(double factor) const {
        P1Solution out = *this;
        for (auto& wp : out.paths) wp.x *= factor;
        return out;
    }
};

}  // namespace mmpass
