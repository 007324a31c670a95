#pragma once

// Closed-form lower bounds on the passive capacity, each with a path schedule
// that attains it, and the path-count conditions for target rates on
// unit-capacity networks.
//
// All three bounds start from one unconstrained optimum. Its flow is split
// into paths by decompose_flow and the link activations are recomputed from
// those paths, so the bounds depend on which optimal vertex the solver
// returned. Every certificate is re-checked with check_path_schedule.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "mmpass/certify.hpp"
#include "mmpass/errors.hpp"
#include "mmpass/formulations.hpp"
#include "mmpass/network.hpp"
#include "mmpass/paths.hpp"
#include "mmpass/schedule.hpp"

namespace mmpass {

/// Unconstrained optimum together with its path decomposition.
struct UnconstrainedOptimum {
    P2Solution edge;
    P1Solution paths;
    std::vector<double> activations;  // recomputed from paths

    double cbar() const noexcept { return edge.rate; }
};

inline UnconstrainedOptimum unconstrained_optimum(const Network& net) {
    UnconstrainedOptimum u;
    u.edge = approximate_capacity(net);
    u.paths = decompose_flow(u.edge, net);
    u.activations = u.paths.link_activations(net);
    return u;
}

struct BoundResult {
    double value = 0.0;
    P1Solution certificate;
};

namespace detail {

inline void require_certificate(const Network& net, const ThresholdMap& th, const BoundResult& b, const char* what) {
    const auto check = check_path_schedule(net, b.certificate, th);
    if (!check.ok())
        throw SolverError(std::string(what) + " certificate failed verification: " + check.violations.front());
}

}  // namespace detail

/// C >= theta_hat * cbar, theta_hat the smallest threshold anywhere.
inline BoundResult bound_naive(const Network& net, const ThresholdMap& th, const UnconstrainedOptimum& opt) {
    require_valid(th, net);
    const double theta_hat = th.min();
    BoundResult b{theta_hat * opt.cbar(), opt.paths.scaled(theta_hat)};
    detail::require_certificate(net, th, b, "naive bound");
    return b;
}

/// C >= min(1, theta_tilde / lambda_tilde) * cbar, with theta_tilde the smallest
/// threshold over activated links and lambda_tilde the largest activation.
inline BoundResult bound_activation_ratio(const Network& net, const ThresholdMap& th, const UnconstrainedOptimum& opt) {
    require_valid(th, net);
    double theta_tilde = std::numeric_limits<double>::infinity();
    double lambda_tilde = 0.0;
    for (LinkId e = 0; e < net.link_count(); ++e) {
        if (opt.activations[e] <= 0.0) continue;
        theta_tilde = std::min(theta_tilde, th[e]);
        lambda_tilde = std::max(lambda_tilde, opt.activations[e]);
    }
    if (lambda_tilde <= 0.0) return {};
    const double factor = std::min(1.0, theta_tilde / lambda_tilde);
    BoundResult b{factor * opt.cbar(), opt.paths.scaled(factor)};
    detail::require_certificate(net, th, b, "activation-ratio bound");
    return b;
}

/// C >= sum_p min(x_p, theta_p x_p / lambda_p) C_p over the active paths, with
/// theta_p the smallest threshold and lambda_p the largest activation on p.
inline BoundResult bound_per_path(const Network& net, const ThresholdMap& th, const UnconstrainedOptimum& opt) {
    require_valid(th, net);
    BoundResult b;
    for (const auto& wp : opt.paths.paths) {
        double theta_p = std::numeric_limits<double>::infinity();
        double lambda_p = 0.0;
        for (LinkId e : wp.path.links) {
            theta_p = std::min(theta_p, th[e]);
            lambda_p = std::max(lambda_p, opt.activations[e]);
        }
        if (lambda_p <= 0.0) continue;
        const double x_hat = std::min(wp.x, theta_p * wp.x / lambda_p);
        b.certificate.paths.push_back({wp.path, x_hat});
        b.value += x_hat * wp.path.capacity;
    }
    detail::require_certificate(net, th, b, "per-path bound");
    return b;
}

inline BoundResult bound_naive(const Network& net, const ThresholdMap& th) {
    return bound_naive(net, th, unconstrained_optimum(net));
}
inline BoundResult bound_activation_ratio(const Network& net, const ThresholdMap& th) {
    return bound_activation_ratio(net, th, unconstrained_optimum(net));
}
inline BoundResult bound_per_path(const Network& net, const ThresholdMap& th) {
    return bound_per_path(net, th, unconstrained_optimum(net));
}

struct BoundReport {
    double cbar = 0.0;
    double passive = 0.0;  // LP passive capacity
    BoundResult naive;
    BoundResult activation_ratio;
    BoundResult per_path;
};

inline BoundReport compute_bounds(const Network& net, const ThresholdMap& th) {
    const auto opt = unconstrained_optimum(net);
    BoundReport r;
    r.cbar = opt.cbar();
    r.passive = passive_capacity(net, th).rate;
    r.naive = bound_naive(net, th, opt);
    r.activation_ratio = bound_activation_ratio(net, th, opt);
    r.per_path = bound_per_path(net, th, opt);
    return r;
}

struct PathCountResult {
    bool achievable = false;
    bool necessary_and_sufficient = true;  // false for M > 1 (sufficient only)
    double required = 0.0;                 // (theta_c / theta_hat) * cbar
    int actual = 0;                        // H_e for M = 1, H_v for M > 1
    double cbar = 0.0;
    double theta_hat = 0.0;
    std::optional<BeamSchedule> schedule;
    double schedule_rate = 0.0;
};

/// Path-count condition for the target rate theta_c * cbar on a unit-capacity
/// network. With M = 1 the condition H_e >= (theta_c / theta) cbar is necessary
/// and sufficient; with M > 1, H_v >= (theta_c / theta) cbar is sufficient.
/// Non-uniform thresholds use the smallest one.
inline PathCountResult path_count_check(const Network& net, const ThresholdMap& th, double theta_c, int beams) {
    require_valid(net);
    require_valid(th, net);
    if (!net.has_unit_capacities()) throw InvalidArgument("path-count conditions need unit link capacities");
    if (!(theta_c >= 0.0 && theta_c <= 1.0)) throw InvalidArgument("theta_c must lie in [0,1]");
    if (beams < 1) throw InvalidArgument("beam count must be >= 1");

    PathCountResult r;
    r.theta_hat = th.min();
    const auto cert = beams == 1 ? count_edge_disjoint(net) : count_vertex_disjoint(net);
    r.actual = cert.count;
    r.necessary_and_sufficient = beams == 1;
    r.cbar = beams == 1 ? std::min(1.0, static_cast<double>(cert.count))
                        : static_cast<double>(std::min(beams, cert.count));
    const double target = theta_c * r.cbar;
    if (target <= 0.0)
        r.required = 0.0;
    else
        r.required = r.theta_hat > 0.0 ? target / r.theta_hat : std::numeric_limits<double>::infinity();
    r.achievable = static_cast<double>(r.actual) >= r.required - 1e-9;

    if (!r.achievable) return r;
    if (target <= 0.0) {
        r.schedule = BeamSchedule{};
        return r;
    }
    if (beams == 1) {
        auto s = edge_disjoint_schedule(cert, net, theta_c, r.cbar, r.theta_hat);
        r.schedule_rate = s.rate;
        r.schedule = std::move(s.schedule);
    } else {
        auto s = vertex_disjoint_schedule(cert, net, beams, theta_c);
        r.schedule_rate = s.rate;
        r.schedule = std::move(s.schedule);
    }
    return r;
}

}  // namespace mmpass
