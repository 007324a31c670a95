#pragma once

// Rate reductions between the passive-user problem and secure communication
// against an eavesdropper on K links, for unit-capacity networks.

#include <algorithm>
#include <functional>
#include <vector>

#include "mmpass/certify.hpp"
#include "mmpass/errors.hpp"
#include "mmpass/formulations.hpp"
#include "mmpass/network.hpp"
#include "mmpass/paths.hpp"

namespace mmpass {

struct WiretapModel {
    int k = 0;  // number of links the adversary observes
};

struct ReductionReport {
    enum class Direction { passive_to_secure, secure_to_passive };
    Direction direction = Direction::passive_to_secure;
    double rate = 0.0;

    int beams = 1;
    int k = 0;                    // passive_to_secure only
    double passive_capacity = 0.0;  // passive_to_secure only
    double leakage = 0.0;         // sum of the K largest thresholds
    int disjoint_paths = 0;       // secure_to_passive only: H_e or H_v
    P1Solution activations;       // secure_to_passive only
    CertificateCheck check;       // secure_to_passive only
};

/// Sum of the k largest thresholds: the worst-case leakage over all k-subsets.
inline double top_k_threshold_sum(const ThresholdMap& th, int k) {
    if (k < 0 || static_cast<std::size_t>(k) > th.size()) throw InvalidArgument("k must lie in [0, link count]");
    std::vector<double> v(th.values().begin(), th.values().end());
    std::partial_sort(v.begin(), v.begin() + k, v.end(), std::greater<>());
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += v[static_cast<std::size_t>(i)];
    return s;
}

/// Secure rate guaranteed by running the optimal passive schedule:
/// R = C - (sum of the K largest thresholds), floored at 0.
inline ReductionReport passive_to_secure(const Network& net, const ThresholdMap& th, WiretapModel wiretap) {
    require_valid(net);
    require_valid(th, net);
    if (!net.has_unit_capacities()) throw InvalidArgument("the secure reduction needs unit link capacities");
    if (wiretap.k < 0 || static_cast<std::size_t>(wiretap.k) > net.link_count())
        throw InvalidArgument("K = " + std::to_string(wiretap.k) + " exceeds the link count " +
                              std::to_string(net.link_count()));
    ReductionReport r;
    r.direction = ReductionReport::Direction::passive_to_secure;
    r.beams = net.m_beams();
    r.k = wiretap.k;
    r.passive_capacity = passive_capacity(net, th).rate;
    r.leakage = top_k_threshold_sum(th, wiretap.k);
    r.rate = std::max(0.0, r.passive_capacity - r.leakage);
    return r;
}

/// Passive-user rate guaranteed by reusing the secure scheme's disjoint paths:
/// each witness path runs for min(share, theta_p), with share = 1/H_e when
/// M = 1 and min(M, H_v)/H_v when M > 1, and theta_p the smallest threshold on
/// the path. The rate depends on which maximum disjoint family is chosen.
inline ReductionReport secure_to_passive(const Network& net, const ThresholdMap& th, int beams) {
    require_valid(net);
    require_valid(th, net);
    if (!net.has_unit_capacities()) throw InvalidArgument("the secure reduction needs unit link capacities");
    if (beams < 1) throw InvalidArgument("beam count must be >= 1");

    ReductionReport r;
    r.direction = ReductionReport::Direction::secure_to_passive;
    r.beams = beams;
    const auto cert = beams == 1 ? count_edge_disjoint(net) : count_vertex_disjoint(net);
    r.disjoint_paths = cert.count;
    if (cert.count == 0) return r;

    const double h = cert.count;
    const double share = beams == 1 ? 1.0 / h : std::min(static_cast<double>(beams), h) / h;
    for (const auto& p : cert.witness) {
        double theta_p = 1.0;
        for (LinkId e : p.links) theta_p = std::min(theta_p, th[e]);
        const double x = std::min(share, theta_p);
        r.activations.paths.push_back({p, x});
        r.rate += x * p.capacity;
    }
    r.check = check_path_schedule(net, r.activations, th, beams);
    if (!r.check.ok()) throw SolverError("reduced passive schedule is infeasible: " + r.check.violations.front());
    return r;
}

}  // namespace mmpass
