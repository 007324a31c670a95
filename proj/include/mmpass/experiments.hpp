#pragma once

// Report builders behind the command-line front end: single-network analysis,
// the Monte-Carlo capacity study and schedule audits.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "mmpass/bounds.hpp"
#include "mmpass/errors.hpp"
#include "mmpass/formulations.hpp"
#include "mmpass/generate.hpp"
#include "mmpass/network.hpp"
#include "mmpass/paths.hpp"
#include "mmpass/schedule.hpp"
#include "mmpass/security.hpp"

namespace mmpass {

/// Nine significant digits, the precision used for every emitted float.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline double round_real(double v) { return std::stod(format_real(v)); }

// ---------------------------------------------------------------- analyze

struct AnalyzeOptions {
    int k = 0;             // wiretapped links
    double theta_c = 1.0;  // target fraction for the path-count check
};

namespace detail {

inline nlohmann::json schedule_json(const BeamSchedule& s) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& ts : s.states) {
        nlohmann::json links = nlohmann::json::array();
        for (const auto& e : ts.state.links) links.push_back({e.tx, e.rx});
        out.push_back({{"duration", round_real(ts.duration)}, {"links", std::move(links)}});
    }
    return out;
}

inline nlohmann::json path_count_json(const PathCountResult& t, double theta_c) {
    return {{"theta_c", round_real(theta_c)},
            {"theta_hat", round_real(t.theta_hat)},
            {"cbar", round_real(t.cbar)},
            {"required_paths", std::isfinite(t.required) ? nlohmann::json(round_real(t.required)) : nlohmann::json("inf")},
            {"disjoint_paths", t.actual},
            {"achievable", t.achievable},
            {"necessary_and_sufficient", t.necessary_and_sufficient},
            {"schedule_rate", round_real(t.schedule_rate)}};
}

}  // namespace detail

/// Full analysis of one network. For M = 1 this runs both capacity programs,
/// the three bounds, the path-count check and both secure reductions; for
/// M > 1 only the constructive results apply, and the report says so.
inline nlohmann::json analyze(const Network& net, const ThresholdMap& th, const AnalyzeOptions& opt = {}) {
    require_valid(net);
    require_valid(th, net);
    using nlohmann::json;

    json r;
    r["n_relays"] = net.n_relays();
    r["m_beams"] = net.m_beams();
    r["links"] = net.link_count();
    r["theta_min"] = round_real(th.min());
    json notices = json::array();

    const bool unit = net.has_unit_capacities();
    const auto he = count_edge_disjoint(net);
    const auto hv = count_vertex_disjoint(net);
    r["edge_disjoint_paths"] = he.count;
    r["vertex_disjoint_paths"] = hv.count;

    if (net.m_beams() == 1) {
        const auto bounds = compute_bounds(net, th);
        const auto passive = passive_capacity(net, th);
        r["approximate_capacity"] = round_real(bounds.cbar);
        r["passive_capacity"] = round_real(passive.rate);
        r["bounds"] = {{"naive", round_real(bounds.naive.value)},
                       {"activation_ratio", round_real(bounds.activation_ratio.value)},
                       {"per_path", round_real(bounds.per_path.value)}};
        r["active_edge_disjoint_paths"] = active_edge_disjoint(passive, net);
        r["schedule"] = detail::schedule_json(schedule_from_activations(net, passive.activations));
    } else {
        notices.push_back("capacity programs are defined for M=1; reporting constructive results only");
        r["approximate_capacity"] = nullptr;
        r["passive_capacity"] = nullptr;
        r["bounds"] = nullptr;
        r["schedule"] = nullptr;
    }

    if (unit) {
        const auto t1 = path_count_check(net, th, opt.theta_c, net.m_beams());
        r["path_count_condition"] = detail::path_count_json(t1, opt.theta_c);
        json secure;
        secure["k"] = opt.k;
        if (net.m_beams() == 1) {
            secure["passive_to_secure"] = round_real(passive_to_secure(net, th, {opt.k}).rate);
        } else {
            secure["passive_to_secure"] = nullptr;
        }
        secure["secure_to_passive"] = round_real(secure_to_passive(net, th, net.m_beams()).rate);
        r["secure"] = secure;
        if (net.m_beams() > 1) {
            r["approximate_capacity"] = round_real(t1.cbar);
            if (t1.schedule) r["schedule"] = detail::schedule_json(*t1.schedule);
        }
    } else {
        notices.push_back("link capacities are not all 1; path-count and secure-rate results are omitted");
        r["path_count_condition"] = nullptr;
        r["secure"] = nullptr;
    }
    r["notices"] = notices;
    return r;
}

// ------------------------------------------------------------ montecarlo

struct MonteCarloConfig {
    int n_relays = 10;
    int trials = 1000;
    double theta = 0.2;
    CapacityDistribution capacities{1.0, 0.1};
    TopologySpec topology = TopologySpec::layered_dag();
    std::uint64_t seed = 1;
    int min_edge_disjoint = 0;  // regenerate the topology until H_e reaches this
    unsigned jobs = 1;
    bool timing = false;  // add the wall-time column to the CSV
};

struct TrialRecord {
    int trial = 0;
    std::uint64_t seed = 0;
    double cbar = 0.0;
    double passive = 0.0;
    double ratio = 0.0;  // passive / cbar, 1 when cbar = 0
    int active_edge_disjoint = 0;
    double wall_ms = 0.0;
};

struct MonteCarloSummary {
    int trials = 0;
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::map<int, int> active_histogram;
};

struct MonteCarloResult {
    Network topology;
    int topology_edge_disjoint = 0;
    std::vector<TrialRecord> records;
    MonteCarloSummary summary;
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Builds the fixed trial topology (unit capacities). With min_edge_disjoint
/// set, successive derived seeds are tried until the topology has that many
/// edge-disjoint paths.
inline Network montecarlo_topology(const MonteCarloConfig& cfg) {
    constexpr int kAttempts = 1000;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const auto s = attempt == 0 ? cfg.seed : mix_seed(cfg.seed, 1000000 + static_cast<std::uint64_t>(attempt));
        auto net = generate_random(cfg.n_relays, cfg.topology, {1.0, 0.0}, s);
        if (count_edge_disjoint(net).count >= cfg.min_edge_disjoint) return net;
    }
    throw InvalidArgument("no topology with " + std::to_string(cfg.min_edge_disjoint) +
                          " edge-disjoint paths found for " + to_string(cfg.topology));
}

inline TrialRecord run_trial(const Network& topology, const MonteCarloConfig& cfg, int trial) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const auto net = draw_capacities(topology, cfg.capacities, rec.seed);
    rec.cbar = approximate_capacity(net).rate;
    const auto passive = passive_capacity(net, ThresholdMap::uniform(net, cfg.theta));
    rec.passive = passive.rate;
    rec.ratio = rec.cbar > 0.0 ? rec.passive / rec.cbar : 1.0;
    rec.active_edge_disjoint = active_edge_disjoint(passive, net);
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

inline MonteCarloResult run_montecarlo(const MonteCarloConfig& cfg) {
    if (cfg.trials < 1) throw InvalidArgument("trials must be >= 1");
    if (!(cfg.theta >= 0.0 && cfg.theta <= 1.0)) throw InvalidArgument("theta must lie in [0,1]");
    MonteCarloResult res;
    res.topology = montecarlo_topology(cfg);
    res.topology_edge_disjoint = count_edge_disjoint(res.topology).count;
    res.records.resize(static_cast<std::size_t>(cfg.trials));

    const unsigned jobs = std::max(1U, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.trials)));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.trials));
    auto worker = [&](unsigned first) {
        for (int t = static_cast<int>(first); t < cfg.trials; t += static_cast<int>(jobs)) {
            try {
                res.records[static_cast<std::size_t>(t)] = run_trial(res.topology, cfg, t);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
        for (auto& th : pool) th.join();
    }
    for (std::size_t t = 0; t < errors.size(); ++t) {
        if (!errors[t]) continue;
        try {
            std::rethrow_exception(errors[t]);
        } catch (const SolverError& e) {
            throw SolverError("trial " + std::to_string(t) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error("trial " + std::to_string(t) + ": " + e.what());
        }
    }

    auto& s = res.summary;
    s.trials = cfg.trials;
    s.min_ratio = res.records.front().ratio;
    s.max_ratio = res.records.front().ratio;
    double sum = 0.0;
    for (const auto& r : res.records) {
        sum += r.ratio;
        s.min_ratio = std::min(s.min_ratio, r.ratio);
        s.max_ratio = std::max(s.max_ratio, r.ratio);
        ++s.active_histogram[r.active_edge_disjoint];
    }
    s.mean_ratio = sum / cfg.trials;
    return res;
}

inline std::string montecarlo_csv(const MonteCarloResult& res, bool timing = false) {
    std::ostringstream os;
    os << "trial,seed,cbar,passive,ratio,active_edge_disjoint";
    if (timing) os << ",wall_ms";
    os << "\n";
    for (const auto& r : res.records) {
        os << r.trial << "," << r.seed << "," << format_real(r.cbar) << "," << format_real(r.passive) << ","
           << format_real(r.ratio) << "," << r.active_edge_disjoint;
        if (timing) os << "," << format_real(r.wall_ms);
        os << "\n";
    }
    return os.str();
}

inline nlohmann::json montecarlo_summary_json(const MonteCarloResult& res, const MonteCarloConfig& cfg) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [k, v] : res.summary.active_histogram) hist[std::to_string(k)] = v;
    return {{"n_relays", cfg.n_relays},
            {"trials", res.summary.trials},
            {"theta", round_real(cfg.theta)},
            {"cap_mean", round_real(cfg.capacities.mean)},
            {"cap_var", round_real(cfg.capacities.variance)},
            {"topology", to_string(cfg.topology)},
            {"seed", cfg.seed},
            {"topology_links", res.topology.link_count()},
            {"topology_edge_disjoint_paths", res.topology_edge_disjoint},
            {"mean_ratio", round_real(res.summary.mean_ratio)},
            {"min_ratio", round_real(res.summary.min_ratio)},
            {"max_ratio", round_real(res.summary.max_ratio)},
            {"active_edge_disjoint_histogram", hist}};
}

// ----------------------------------------------------------------- audit

struct LinkAudit {
    Edge link;
    double activation = 0.0;
    double threshold = 1.0;
    bool ok = true;
};

struct AuditReport {
    std::vector<LinkAudit> links;
    std::vector<std::string> violations;
    double total_duration = 0.0;
    double rate = 0.0;

    bool ok() const noexcept { return violations.empty(); }
};

/// Checks a schedule against the beam limits of every state, the total time
/// budget and the per-link thresholds, and recomputes the rate it supports.
inline AuditReport audit_schedule(const Network& net, const ThresholdMap& th, const BeamSchedule& schedule,
                                  double tol = kFeasTol) {
    require_valid(net);
    require_valid(th, net);
    AuditReport rep;
    bool links_known = true;
    for (std::size_t s = 0; s < schedule.states.size(); ++s) {
        const auto& ts = schedule.states[s];
        if (!(ts.duration >= 0.0)) rep.violations.push_back("state " + std::to_string(s) + ": negative duration");
        for (auto& msg : check_state(net, ts.state, net.m_beams())) {
            if (msg.find("not in the network") != std::string::npos) links_known = false;
            rep.violations.push_back("state " + std::to_string(s) + ": " + msg);
        }
        rep.total_duration += ts.duration;
    }
    if (rep.total_duration > 1.0 + tol)
        rep.violations.push_back("total duration " + format_real(rep.total_duration) + " exceeds 1");
    if (!links_known) return rep;

    const auto act = schedule.link_activations(net);
    for (LinkId e = 0; e < net.link_count(); ++e) {
        LinkAudit la{{net.link(e).tx, net.link(e).rx}, act[e], th[e], act[e] <= th[e] + tol};
        if (!la.ok)
            rep.violations.push_back("link " + std::to_string(la.link.tx) + "->" + std::to_string(la.link.rx) +
                                     " active " + format_real(act[e]) + " > threshold " + format_real(th[e]));
        rep.links.push_back(la);
    }
    rep.rate = schedule_rate(net, schedule);
    return rep;
}

inline nlohmann::json audit_json(const AuditReport& rep) {
    nlohmann::json links = nlohmann::json::array();
    for (const auto& la : rep.links)
        links.push_back({{"tx", la.link.tx},
                         {"rx", la.link.rx},
                         {"activation", round_real(la.activation)},
                         {"threshold", round_real(la.threshold)},
                         {"ok", la.ok}});
    return {{"pass", rep.ok()},
            {"total_duration", round_real(rep.total_duration)},
            {"rate", round_real(rep.rate)},
            {"links", links},
            {"violations", rep.violations}};
}

}  // namespace mmpass
