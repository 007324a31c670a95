#include <gtest/gtest.h>

#include <random>

#include "mmpass/mmpass.hpp"
#include "oracles.hpp"

using namespace mmpass;

TEST(Bounds, StarWithOneWideRoute) {
    const auto net = testnet::star(5, 2.0);
    const auto th = ThresholdMap::uniform(net, 0.2);
    const auto r = compute_bounds(net, th);
    EXPECT_NEAR(r.cbar, 2.0, 1e-9);
    EXPECT_NEAR(r.passive, 1.2, 1e-9);
    EXPECT_NEAR(r.naive.value, 0.4, 1e-9);
    EXPECT_NEAR(r.activation_ratio.value, 0.4, 1e-9);
    EXPECT_NEAR(r.per_path.value, 0.4, 1e-9);
}

TEST(Bounds, OrderedAndCertified) {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 120; ++it) {
        const auto net = testnet::random_network(rng, 6, 0.45, false, 0.05);
        const auto th = testnet::random_thresholds(rng, net);
        const auto r = compute_bounds(net, th);
        EXPECT_LE(r.naive.value, r.activation_ratio.value + 1e-9);
        EXPECT_LE(r.activation_ratio.value, r.per_path.value + 1e-9);
        EXPECT_LE(r.per_path.value, r.passive + 1e-9);
        for (const auto* b : {&r.naive, &r.activation_ratio, &r.per_path}) {
            EXPECT_NEAR(b->certificate.rate(), b->value, 1e-9);
            const auto check = check_path_schedule(net, b->certificate, th);
            EXPECT_TRUE(check.ok()) << (check.violations.empty() ? "" : check.violations.front());
            // the certificate is also schedulable as a sequence of beam states
            EXPECT_NO_THROW(schedule_from_activations(net, b->certificate.link_activations(net)));
        }
    }
}

TEST(Bounds, ThetaOneIsTight) {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 30; ++it) {
        const auto net = testnet::random_network(rng, 5, 0.5, false);
        const auto r = compute_bounds(net, ThresholdMap::uniform(net, 1.0));
        EXPECT_NEAR(r.naive.value, r.cbar, 1e-7);
        EXPECT_NEAR(r.per_path.value, r.cbar, 1e-7);
    }
}

TEST(CertificateChecker, FlagsViolations) {
    const auto net = testnet::star(2);
    P1Solution sol;
    sol.paths.push_back({make_path(net, {0, 1, 3}), 0.7});
    sol.paths.push_back({make_path(net, {0, 2, 3}), 0.7});
    const auto c = check_path_schedule(net, sol);
    EXPECT_FALSE(c.ok());
    EXPECT_NEAR(c.max_node_usage, 1.4, 1e-12);
    EXPECT_TRUE(check_path_schedule(net.with_beams(2), sol, std::nullopt, 2).ok());
    EXPECT_FALSE(check_path_schedule(net.with_beams(2), sol, ThresholdMap::uniform(net, 0.5), 2).ok());

    P1Solution forged;
    auto p = make_path(net, {0, 1, 3});
    p.capacity = 5.0;  // claims more than the links carry
    forged.paths.push_back({p, 0.5});
    EXPECT_FALSE(check_path_schedule(net, forged).ok());
}

TEST(PathCountCondition, StarExamples) {
    const auto net = testnet::star(5);
    const auto th = ThresholdMap::uniform(net, 0.2);
    const auto r = path_count_check(net, th, 1.0, 1);
    EXPECT_TRUE(r.achievable);
    EXPECT_TRUE(r.necessary_and_sufficient);
    EXPECT_EQ(r.actual, 5);
    EXPECT_NEAR(r.required, 5.0, 1e-12);
    ASSERT_TRUE(r.schedule);
    EXPECT_NEAR(r.schedule_rate, 1.0, 1e-9);

    const auto small = testnet::star(4);
    const auto r4 = path_count_check(small, ThresholdMap::uniform(small, 0.2), 1.0, 1);
    EXPECT_FALSE(r4.achievable);
    EXPECT_FALSE(r4.schedule);

    EXPECT_THROW(path_count_check(testnet::star(2, 2.0), ThresholdMap::uniform(testnet::star(2), 0.2), 1.0, 1),
                 InvalidArgument);
}

TEST(PathCountCondition, VerdictMatchesLp) {
    std::mt19937_64 rng(47);
    int yes = 0, no = 0;
    for (int it = 0; it < 60; ++it) {
        const auto net = testnet::random_network(rng, 6, 0.5, true);
        for (double theta : {0.1, 0.2, 0.25})
            for (double theta_c : {0.5, 1.0}) {
                const auto th = ThresholdMap::uniform(net, theta);
                const auto r = path_count_check(net, th, theta_c, 1);
                const double cbar = approximate_capacity(net).rate;
                EXPECT_NEAR(r.cbar, cbar, 1e-7);
                const bool lp = passive_capacity(net, th).rate >= theta_c * cbar - 1e-9;
                EXPECT_EQ(r.achievable, lp);
                (lp ? yes : no)++;
                if (r.achievable && r.schedule) {
                    const auto act = r.schedule->link_activations(net);
                    for (LinkId e = 0; e < net.link_count(); ++e) EXPECT_LE(act[e], theta + 1e-9);
                    EXPECT_GE(r.schedule_rate, theta_c * cbar - 1e-9);
                }
            }
    }
    EXPECT_GT(yes, 10);
    EXPECT_GT(no, 10);
}

TEST(PathCountCondition, MultiBeamIsSufficient) {
    for (int h = 2; h <= 6; ++h)
        for (int m = 2; m <= 4; ++m) {
            const auto net = generate_random(h, TopologySpec::parallel(h), {1.0, 0.0}, 1, m);
            const double theta = 0.25;
            const auto th = ThresholdMap::uniform(net, theta);
            const auto r = path_count_check(net, th, 0.5, m);
            EXPECT_FALSE(r.necessary_and_sufficient);
            EXPECT_EQ(r.actual, h);
            EXPECT_EQ(r.achievable, h >= 0.5 * std::min(m, h) / theta - 1e-9);
            if (r.achievable) {
                ASSERT_TRUE(r.schedule);
                EXPECT_NEAR(r.schedule_rate, 0.5 * std::min(m, h), 1e-9);
                const auto act = r.schedule->link_activations(net);
                for (double a : act) EXPECT_LE(a, theta + 1e-12);
            }
        }
}
