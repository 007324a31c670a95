#pragma once

// Builders for the two equivalent capacity programs of a full-duplex 1-2-1
// network with single-beam source and destination:
//
//   edge-based:  max sum_j F_{dst,j}
//                F_e <= lambda_e * ell_e            (per link)
//                in-flow = out-flow                 (per relay)
//                sum_out lambda <= 1, sum_in lambda <= 1 (per node)
//                0 <= lambda_e [<= theta_e]
//
//   path-based:  max sum_p x_p C_p
//                sum_{p through i} x_p C_p / ell(link of p leaving i)  <= 1
//                sum_{p through i} x_p C_p / ell(link of p entering i) <= 1
//                [sum_{p through e} x_p C_p / ell_e <= theta_e]
//
// Zero-capacity links get no columns. Threshold caps enter the edge form as
// column upper bounds.

#include <optional>
#include <string>
#include <vector>

#include "mmpass/errors.hpp"
#include "mmpass/lp.hpp"
#include "mmpass/network.hpp"
#include "mmpass/solution.hpp"

namespace mmpass {

inline constexpr std::size_t kDefaultPathLimit = 10000;

namespace detail {

inline void require_single_beam(const Network& net, const char* what) {
    if (net.m_beams() != 1)
        throw InvalidArgument(std::string(what) + " is defined for M=1 (got M=" + std::to_string(net.m_beams()) + ")");
}

inline std::string link_tag(const Link& l) { return std::to_string(l.rx) + "_" + std::to_string(l.tx); }

}  // namespace detail

inline LpProblem build_p2(const Network& net, const std::optional<ThresholdMap>& thresholds = std::nullopt) {
    require_valid(net);
    detail::require_single_beam(net, "P2");
    if (thresholds) require_valid(*thresholds, net);

    LpProblem lp;
    const auto L = net.link_count();
    std::vector<std::optional<std::size_t>> fcol(L), lcol(L);
    for (LinkId e = 0; e < L; ++e) {
        const auto& l = net.link(e);
        if (l.capacity <= 0.0) continue;
        const double cost = l.rx == net.destination() ? 1.0 : 0.0;
        fcol[e] = lp.add_variable("F_" + detail::link_tag(l), cost, 0.0, kInf,
                                  {VariableLabel::Kind::flow, e});
        const double hi = thresholds ? (*thresholds)[e] : kInf;
        lcol[e] = lp.add_variable("lambda_" + detail::link_tag(l), 0.0, 0.0, hi,
                                  {VariableLabel::Kind::activation, e});
    }

    for (LinkId e = 0; e < L; ++e) {
        if (!fcol[e]) continue;
        auto& row = lp.add_constraint("cap_" + detail::link_tag(net.link(e)), Relation::less_equal, 0.0);
        row.coeffs[*fcol[e]] = 1.0;
        row.coeffs[*lcol[e]] = -net.link(e).capacity;
    }

    for (NodeId i = 1; i <= net.n_relays(); ++i) {
        bool any = false;
        for (LinkId e : net.in_links(i)) any = any || fcol[e].has_value();
        for (LinkId e : net.out_links(i)) any = any || fcol[e].has_value();
        if (!any) continue;
        auto& row = lp.add_constraint("flow_" + std::to_string(i), Relation::equal, 0.0);
        for (LinkId e : net.in_links(i))
            if (fcol[e]) row.coeffs[*fcol[e]] = 1.0;
        for (LinkId e : net.out_links(i))
            if (fcol[e]) row.coeffs[*fcol[e]] = -1.0;
    }

    for (NodeId i = 0; i <= net.n_relays(); ++i) {
        bool any = false;
        for (LinkId e : net.out_links(i)) any = any || lcol[e].has_value();
        if (!any) continue;
        auto& row = lp.add_constraint("tx_" + std::to_string(i), Relation::less_equal, 1.0);
        for (LinkId e : net.out_links(i))
            if (lcol[e]) row.coeffs[*lcol[e]] = 1.0;
    }
    for (NodeId j = 1; j <= net.destination(); ++j) {
        bool any = false;
        for (LinkId e : net.in_links(j)) any = any || lcol[e].has_value();
        if (!any) continue;
        auto& row = lp.add_constraint("rx_" + std::to_string(j), Relation::less_equal, 1.0);
        for (LinkId e : net.in_links(j))
            if (lcol[e]) row.coeffs[*lcol[e]] = 1.0;
    }
    return lp;
}

/// Builds the path-based program over the given paths. A partial path set
/// yields a lower bound on the full program. Paths of zero capacity get no
/// column; their x_p stays 0.
inline LpProblem build_p1(const Network& net, const PathSet& paths,
                          const std::optional<ThresholdMap>& thresholds = std::nullopt,
                          std::size_t path_limit = kDefaultPathLimit) {
    require_valid(net);
    detail::require_single_beam(net, "P1");
    if (thresholds) require_valid(*thresholds, net);
    if (paths.size() > path_limit) throw PathOverflow(path_limit);

    LpProblem lp;
    std::vector<std::size_t> col_path;
    for (std::size_t k = 0; k < paths.size(); ++k) {
        const auto& p = paths.paths[k];
        if (!(p.capacity > 0.0)) continue;
        lp.add_variable("x_" + std::to_string(k), p.capacity, 0.0, kInf, {VariableLabel::Kind::path, k});
        col_path.push_back(k);
    }

    const auto nodes = static_cast<std::size_t>(net.node_count());
    std::vector<std::vector<double>> tx(nodes, std::vector<double>(col_path.size(), 0.0));
    std::vector<std::vector<double>> rx = tx;
    std::vector<std::vector<double>> link_rows(net.link_count(), std::vector<double>(col_path.size(), 0.0));
    for (std::size_t c = 0; c < col_path.size(); ++c) {
        const auto& p = paths.paths[col_path[c]];
        for (LinkId e : p.links) {
            const auto& l = net.link(e);
            const double f = p.capacity / l.capacity;
            tx[static_cast<std::size_t>(l.tx)][c] += f;
            rx[static_cast<std::size_t>(l.rx)][c] += f;
            link_rows[e][c] += f;
        }
    }

    auto nonzero = [](const std::vector<double>& v) {
        for (double a : v)
            if (a != 0.0) return true;
        return false;
    };
    for (NodeId i = 0; i <= net.n_relays(); ++i) {
        auto& coeffs = tx[static_cast<std::size_t>(i)];
        if (!nonzero(coeffs)) continue;
        lp.add_constraint("tx_" + std::to_string(i), Relation::less_equal, 1.0).coeffs = coeffs;
    }
    for (NodeId j = 1; j <= net.destination(); ++j) {
        auto& coeffs = rx[static_cast<std::size_t>(j)];
        if (!nonzero(coeffs)) continue;
        lp.add_constraint("rx_" + std::to_string(j), Relation::less_equal, 1.0).coeffs = coeffs;
    }
    if (thresholds) {
        for (LinkId e = 0; e < net.link_count(); ++e) {
            if (!nonzero(link_rows[e])) continue;
            lp.add_constraint("theta_" + detail::link_tag(net.link(e)), Relation::less_equal, (*thresholds)[e])
                .coeffs = link_rows[e];
        }
    }
    return lp;
}

namespace detail {

inline LpSolution solve_or_throw(const LpProblem& lp, const char* what) {
    auto sol = solve(lp);
    if (!sol.optimal())
        throw SolverError(std::string(what) + " returned status " + to_string(sol.status) +
                          "; the program is always feasible and bounded");
    return sol;
}

}  // namespace detail

/// Maps an optimal solution of build_p2 back onto the links.
inline P2Solution p2_from_lp(const Network& net, const LpProblem& lp, const LpSolution& sol) {
    P2Solution out;
    out.flows.assign(net.link_count(), 0.0);
    out.activations.assign(net.link_count(), 0.0);
    for (std::size_t j = 0; j < lp.variable_count(); ++j) {
        const auto& lab = lp.labels[j];
        if (lab.kind == VariableLabel::Kind::flow) out.flows[lab.index] = sol.point[j];
        if (lab.kind == VariableLabel::Kind::activation) out.activations[lab.index] = sol.point[j];
    }
    out.rate = sol.value;
    return out;
}

inline P1Solution p1_from_lp(const PathSet& paths, const LpProblem& lp, const LpSolution& sol) {
    P1Solution out;
    for (std::size_t j = 0; j < lp.variable_count(); ++j) {
        const auto& lab = lp.labels[j];
        if (lab.kind != VariableLabel::Kind::path || sol.point[j] <= 0.0) continue;
        out.paths.push_back({paths.paths[lab.index], sol.point[j]});
    }
    return out;
}

/// Solves the edge-based program, optionally under per-link thresholds.
inline P2Solution solve_p2(const Network& net, const std::optional<ThresholdMap>& thresholds = std::nullopt) {
    const auto lp = build_p2(net, thresholds);
    return p2_from_lp(net, lp, detail::solve_or_throw(lp, "P2"));
}

/// Approximate capacity: the unconstrained edge-based optimum.
inline P2Solution approximate_capacity(const Network& net) { return solve_p2(net); }

/// Best rate whose schedule keeps every link activation within its threshold.
inline P2Solution passive_capacity(const Network& net, const ThresholdMap& thresholds) {
    return solve_p2(net, thresholds);
}

inline P1Solution solve_p1(const Network& net, const PathSet& paths,
                           const std::optional<ThresholdMap>& thresholds = std::nullopt,
                           std::size_t path_limit = kDefaultPathLimit) {
    const auto lp = build_p1(net, paths, thresholds, path_limit);
    return p1_from_lp(paths, lp, detail::solve_or_throw(lp, "P1"));
}

}  // namespace mmpass
