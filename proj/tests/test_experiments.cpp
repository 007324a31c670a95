#include <gtest/gtest.h>

#include <sstream>

#include "mmpass/mmpass.hpp"
#include "oracles.hpp"

using namespace mmpass;

TEST(Analyze, StarReport) {
    const auto net = testnet::star(5);
    const auto r = analyze(net, ThresholdMap::uniform(net, 0.2), {2, 1.0});
    EXPECT_EQ(r["edge_disjoint_paths"], 5);
    EXPECT_DOUBLE_EQ(r["approximate_capacity"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(r["passive_capacity"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(r["secure"]["passive_to_secure"].get<double>(), 0.6);
    EXPECT_TRUE(r["path_count_condition"]["achievable"].get<bool>());
    EXPECT_EQ(r["schedule"].size(), 5u);
    EXPECT_TRUE(r["notices"].empty());
}

TEST(Analyze, MultiBeamReportsConstructiveResults) {
    const auto net = generate_random(4, TopologySpec::parallel(4), {1.0, 0.0}, 1, 2);
    const auto r = analyze(net, ThresholdMap::uniform(net, 0.5), {0, 1.0});
    EXPECT_TRUE(r["passive_capacity"].is_null());
    EXPECT_DOUBLE_EQ(r["approximate_capacity"].get<double>(), 2.0);
    EXPECT_EQ(r["vertex_disjoint_paths"], 4);
    EXPECT_FALSE(r["notices"].empty());
}

TEST(FormatReal, NineSignificantDigits) {
    EXPECT_EQ(format_real(0.1 + 0.2), "0.3");
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_real(2.0), "2");
}

TEST(MonteCarlo, DeterministicAcrossRunsAndThreads) {
    MonteCarloConfig cfg;
    cfg.n_relays = 6;
    cfg.trials = 40;
    cfg.seed = 99;
    const auto a = montecarlo_csv(run_montecarlo(cfg));
    const auto b = montecarlo_csv(run_montecarlo(cfg));
    cfg.jobs = 4;
    const auto c = montecarlo_csv(run_montecarlo(cfg));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    cfg.seed = 100;
    EXPECT_NE(a, montecarlo_csv(run_montecarlo(cfg)));
}

TEST(MonteCarlo, CsvShape) {
    MonteCarloConfig cfg;
    cfg.n_relays = 4;
    cfg.trials = 5;
    const auto res = run_montecarlo(cfg);
    std::istringstream in(montecarlo_csv(res));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "trial,seed,cbar,passive,ratio,active_edge_disjoint");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
        EXPECT_EQ(line.rfind(std::to_string(rows) + ",", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, 5);
    EXPECT_NE(montecarlo_csv(res, true).find(",wall_ms\n"), std::string::npos);
}

TEST(MonteCarlo, RatiosWithinThresholdAndOne) {
    MonteCarloConfig cfg;
    cfg.trials = 60;
    cfg.min_edge_disjoint = 5;
    const auto res = run_montecarlo(cfg);
    EXPECT_GE(res.topology_edge_disjoint, 5);
    for (const auto& r : res.records) {
        EXPECT_GE(r.ratio, cfg.theta - 1e-9);
        EXPECT_LE(r.ratio, 1.0 + 1e-9);
        EXPECT_LE(r.passive, r.cbar + 1e-9);
    }
    EXPECT_EQ(res.summary.trials, 60);
    EXPECT_LE(res.summary.min_ratio, res.summary.mean_ratio);
    EXPECT_LE(res.summary.mean_ratio, res.summary.max_ratio);
}

TEST(MonteCarlo, ParallelPathsBoundaryCase) {
    MonteCarloConfig cfg;
    cfg.trials = 10;
    cfg.capacities = {1.0, 0.0};
    cfg.topology = TopologySpec::parallel(5);
    const auto res = run_montecarlo(cfg);
    for (const auto& r : res.records) {
        EXPECT_DOUBLE_EQ(r.ratio, 1.0);
        EXPECT_EQ(r.active_edge_disjoint, 5);
    }
}

TEST(MonteCarlo, RejectsBadConfig) {
    MonteCarloConfig cfg;
    cfg.trials = 0;
    EXPECT_THROW(run_montecarlo(cfg), InvalidArgument);
    cfg.trials = 1;
    cfg.n_relays = 3;
    cfg.min_edge_disjoint = 50;
    EXPECT_THROW(run_montecarlo(cfg), InvalidArgument);
}

TEST(Audit, AcceptsOptimalScheduleAndFlagsViolations) {
    const auto net = testnet::star(5, 2.0);
    const auto th = ThresholdMap::uniform(net, 0.2);
    const auto s = schedule_from_activations(net, passive_capacity(net, th).activations);
    const auto good = audit_schedule(net, th, s);
    EXPECT_TRUE(good.ok());
    EXPECT_NEAR(good.rate, 1.2, 1e-7);

    BeamSchedule over = s;
    over.states[0].duration += 0.1;
    const auto bad = audit_schedule(net, th, over);
    EXPECT_FALSE(bad.ok());
    EXPECT_FALSE(audit_json(bad)["pass"].get<bool>());

    BeamSchedule clash{{{{{{0, 1}, {0, 2}}}, 0.1}}};
    EXPECT_FALSE(audit_schedule(net, th, clash).ok());

    BeamSchedule missing{{{{{{1, 2}}}, 0.1}}};
    EXPECT_FALSE(audit_schedule(net, th, missing).ok());

    BeamSchedule too_long{{{{{{0, 1}}}, 0.6}, {{{{0, 2}}}, 0.6}}};
    EXPECT_FALSE(audit_schedule(net, ThresholdMap::uniform(net, 1.0), too_long).ok());
}
