// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mmpass/mmpass.hpp"
#include "oracles.hpp"

using namespace mmpass;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure only; later checks keep running.
struct Tally {
    Outcome out;
    int checks = 0;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok && out.pass) {
            out.pass = false;
            out.detail = what;
        }
    }
    void near(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os.precision(12);
        os << what << ": got " << got << ", want " << want;
        require(std::abs(got - want) <= tol, os.str());
    }
    Outcome done() {
        if (out.pass) out.detail = std::to_string(checks) + " checks";
        return out;
    }
};

Network fig1(double p1_capacity) { return testnet::star(5, p1_capacity); }

Outcome golden_single_network() {
    Tally t;
    const auto net = fig1(2.0);
    const auto th = ThresholdMap::uniform(net, 0.2);
    t.near(approximate_capacity(net).rate, 2.0, 1e-6, "approximate capacity");
    t.near(passive_capacity(net, th).rate, 1.2, 1e-6, "passive capacity");
    const auto b = compute_bounds(net, th);
    t.near(b.naive.value, 0.4, 1e-6, "naive bound");
    t.near(b.activation_ratio.value, 0.4, 1e-6, "activation-ratio bound");
    t.near(b.per_path.value, 0.4, 1e-6, "per-path bound");
    return t.done();
}

Outcome golden_unit_network() {
    Tally t;
    const auto net = fig1(1.0);
    const auto th = ThresholdMap::uniform(net, 0.2);
    t.require(count_edge_disjoint(net).count == 5, "H_e != 5");
    t.near(passive_capacity(net, th).rate, 1.0, 1e-6, "passive capacity");
    for (int k = 0; k <= 3; ++k)
        t.near(passive_to_secure(net, th, {k}).rate, 1.0 - 0.2 * k, 1e-6, "secure rate K=" + std::to_string(k));
    return t.done();
}

Outcome path_edge_equivalence() {
    Tally t;
    std::mt19937_64 rng(20240301);
    for (int i = 0; i < 50; ++i) {
        const auto net = testnet::random_network(rng, 6, 0.4, false);
        const auto th = testnet::random_thresholds(rng, net);
        const auto paths = enumerate_paths(net, kDefaultPathLimit);
        const std::string tag = "network " + std::to_string(i);
        t.near(solve_p1(net, paths).rate(), approximate_capacity(net).rate, 1e-6, tag + " unconstrained");
        t.near(solve_p1(net, paths, th).rate(), passive_capacity(net, th).rate, 1e-6, tag + " thresholds");
    }
    return t.done();
}

Outcome bound_chain() {
    Tally t;
    std::mt19937_64 rng(20240302);
    for (int i = 0; i < 200; ++i) {
        const auto net = testnet::random_network(rng, 6, 0.4, false, 0.05);
        const auto th = testnet::random_thresholds(rng, net);
        const auto r = compute_bounds(net, th);
        const std::string tag = "draw " + std::to_string(i);
        t.require(r.naive.value <= r.activation_ratio.value + 1e-9, tag + ": naive > activation-ratio");
        t.require(r.activation_ratio.value <= r.per_path.value + 1e-9, tag + ": activation-ratio > per-path");
        t.require(r.per_path.value <= r.passive + 1e-9, tag + ": per-path > passive capacity");
        for (const auto* b : {&r.naive, &r.activation_ratio, &r.per_path})
            t.require(check_path_schedule(net, b->certificate, th).ok(), tag + ": certificate rejected");
    }
    return t.done();
}

Outcome path_count_iff() {
    Tally t;
    std::mt19937_64 rng(20240303);
    int achievable = 0, cases = 0;
    for (int i = 0; i < 100; ++i) {
        const auto net = testnet::random_network(rng, 6, 0.45, true);
        const double cbar = approximate_capacity(net).rate;
        for (double theta : {0.1, 0.2, 0.25})
            for (double theta_c : {0.5, 1.0}) {
                const auto th = ThresholdMap::uniform(net, theta);
                const bool lp = passive_capacity(net, th).rate >= theta_c * cbar - 1e-9;
                const bool verdict = path_count_check(net, th, theta_c, 1).achievable;
                t.require(verdict == lp, "network " + std::to_string(i) + " verdict disagrees with the LP");
                achievable += verdict;
                ++cases;
            }
    }
    Outcome o = t.done();
    if (o.pass) o.detail += ", " + std::to_string(achievable) + "/" + std::to_string(cases) + " achievable";
    return o;
}

Outcome multi_beam_construction() {
    Tally t;
    const double theta_c = 0.8;
    for (int h = 2; h <= 6; ++h)
        for (int m = 2; m <= 4; ++m) {
            const std::string tag = "H_v=" + std::to_string(h) + " M=" + std::to_string(m);
            const auto net = generate_random(h, TopologySpec::parallel(h), {1.0, 0.0}, 1, m);
            const auto cert = count_vertex_disjoint(net);
            t.require(cert.count == h, tag + ": wrong vertex-disjoint count");
            const auto s = vertex_disjoint_schedule(cert, net, m, theta_c);
            t.near(s.rate, theta_c * std::min(m, h), 1e-9, tag + " rate");
            t.near(schedule_rate(net, s.schedule), theta_c * std::min(m, h), 1e-9, tag + " replayed rate");
            for (const auto& ts : s.schedule.states)
                t.require(check_state(net, ts.state, m).empty(), tag + ": state breaks beam limits");
            t.near(m * s.state_duration, s.gamma, 1e-12, tag + " M*lambda_s = gamma");
            t.near(static_cast<double>(s.state_count) * s.state_duration, theta_c, 1e-12, tag + " |S|*lambda_s");
        }
    return t.done();
}

Outcome schedule_reconstruction() {
    Tally t;
    std::mt19937_64 rng(20240304);
    std::size_t worst_states = 0;
    for (int i = 0; i < 100; ++i) {
        const auto net = testnet::random_network(rng, 6, 0.45, false, 0.05);
        const auto th = testnet::random_thresholds(rng, net);
        const auto lambda = (i % 2 ? passive_capacity(net, th) : approximate_capacity(net)).activations;
        const auto s = schedule_from_activations(net, lambda);
        const auto act = s.link_activations(net);
        std::size_t active = 0;
        for (LinkId e = 0; e < net.link_count(); ++e) {
            t.require(std::abs(act[e] - lambda[e]) <= 1e-7, "optimum " + std::to_string(i) + ": replay mismatch");
            active += lambda[e] > 1e-9;
        }
        t.require(s.states.size() <= active + 1, "optimum " + std::to_string(i) + ": too many states");
        for (const auto& ts : s.states) t.require(check_state(net, ts.state, 1).empty(), "state breaks matching");
        worst_states = std::max(worst_states, s.states.size());
    }
    Outcome o = t.done();
    if (o.pass) o.detail += ", at most " + std::to_string(worst_states) + " states";
    return o;
}

Outcome top_k_oracle() {
    Tally t;
    std::mt19937_64 rng(20240305);
    int networks = 0;
    while (networks < 100) {
        const auto net = testnet::random_network(rng, 5, 0.3, true);
        if (net.link_count() < 3 || net.link_count() > 12) continue;
        ++networks;
        const auto th = testnet::random_thresholds(rng, net);
        const std::vector<double> v(th.values().begin(), th.values().end());
        for (int k = 1; k <= 3; ++k)
            t.near(top_k_threshold_sum(th, k), oracle::top_k_exhaustive(v, k), 1e-12, "K=" + std::to_string(k));
    }
    return t.done();
}

MonteCarloConfig study_config() {
    MonteCarloConfig cfg;
    cfg.n_relays = 10;
    cfg.trials = 1000;
    cfg.theta = 0.2;
    cfg.capacities = {1.0, 0.1};
    cfg.topology = TopologySpec::layered_dag();
    cfg.seed = 1;
    cfg.min_edge_disjoint = 5;
    cfg.jobs = std::max(1U, std::thread::hardware_concurrency());
    return cfg;
}

std::string study_csv;

Outcome monte_carlo_shape() {
    Tally t;
    const auto cfg = study_config();
    const auto res = run_montecarlo(cfg);
    t.require(res.topology_edge_disjoint >= 5, "topology has H_e < 5");
    for (const auto& r : res.records)
        t.require(r.ratio >= 0.2 - 1e-9 && r.ratio <= 1.0 + 1e-9, "trial " + std::to_string(r.trial) + " ratio out of range");
    study_csv = montecarlo_csv(res);

    auto flat = cfg;
    flat.capacities = {1.0, 0.0};
    flat.topology = TopologySpec::parallel(5);
    flat.min_edge_disjoint = 0;
    const auto boundary = run_montecarlo(flat);
    for (const auto& r : boundary.records) {
        t.require(r.ratio == 1.0, "boundary trial " + std::to_string(r.trial) + " ratio != 1");
        t.require(r.active_edge_disjoint == 5, "boundary trial " + std::to_string(r.trial) + " active paths != 5");
    }
    Outcome o = t.done();
    if (o.pass) {
        std::ostringstream os;
        os << o.detail << ", H_e=" << res.topology_edge_disjoint << ", ratio in [" << format_real(res.summary.min_ratio)
           << ", " << format_real(res.summary.max_ratio) << "]";
        o.detail = os.str();
    }
    return o;
}

Outcome determinism() {
    Tally t;
    auto cfg = study_config();
    t.require(!study_csv.empty(), "study run missing");
    t.require(montecarlo_csv(run_montecarlo(cfg)) == study_csv, "rerun CSV differs");
    cfg.jobs = 1;
    t.require(montecarlo_csv(run_montecarlo(cfg)) == study_csv, "single-thread CSV differs");
    return t.done();
}

struct Criterion {
    int id;
    const char* title;
    double time_limit_s;  // 0 = none
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "single-network golden values (star, one route at capacity 2)", 1.0, golden_single_network},
        {2, "unit-capacity golden values and secure rates", 0.0, golden_unit_network},
        {3, "path and edge programs agree on 50 random networks", 30.0, path_edge_equivalence},
        {4, "bound chain and certificates on 200 random draws", 0.0, bound_chain},
        {5, "path-count verdict matches the LP on 100 unit networks", 0.0, path_count_iff},
        {6, "multi-beam round-robin construction for H_v in 2..6, M in 2..4", 0.0, multi_beam_construction},
        {7, "schedule reconstruction on 100 LP optima", 0.0, schedule_reconstruction},
        {8, "top-K leakage equals exhaustive K-subset search", 0.0, top_k_oracle},
        {9, "Monte-Carlo ratio shape (layered, H_e >= 5) and boundary case", 300.0, monte_carlo_shape},
        {10, "Monte-Carlo CSV is byte-identical on rerun", 0.0, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.time_limit_s > 0.0 && secs > c.time_limit_s && o.pass)
            o = {false, "took " + format_real(secs) + "s, limit " + format_real(c.time_limit_s) + "s"};
        failed += !o.pass;
        std::printf("criterion %2d %s  %s  (%s; %.2fs)\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
