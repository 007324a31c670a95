#include <gtest/gtest.h>

#include <random>

#include "mmpass/mmpass.hpp"
#include "oracles.hpp"

using namespace mmpass;

TEST(TopK, MatchesExhaustiveSubsets) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> len(3, 12);
    for (int it = 0; it < 200; ++it) {
        std::vector<double> v(static_cast<std::size_t>(len(rng)));
        for (auto& t : v) t = it % 3 == 0 ? std::round(u(rng) * 4.0) / 4.0 : u(rng);  // include ties
        const ThresholdMap th(v);
        for (int k = 0; k <= 3; ++k) EXPECT_NEAR(top_k_threshold_sum(th, k), oracle::top_k_exhaustive(v, k), 1e-12);
    }
    EXPECT_THROW(top_k_threshold_sum(ThresholdMap({0.1, 0.2}), 3), InvalidArgument);
    EXPECT_THROW(top_k_threshold_sum(ThresholdMap({0.1, 0.2}), -1), InvalidArgument);
}

TEST(PassiveToSecure, StarUnitCapacities) {
    const auto net = testnet::star(5);
    const auto th = ThresholdMap::uniform(net, 0.2);
    for (int k = 0; k <= 3; ++k) {
        const auto r = passive_to_secure(net, th, {k});
        EXPECT_NEAR(r.passive_capacity, 1.0, 1e-9);
        EXPECT_NEAR(r.leakage, 0.2 * k, 1e-12);
        EXPECT_NEAR(r.rate, 1.0 - 0.2 * k, 1e-9);
    }
    EXPECT_NEAR(passive_to_secure(net, th, {10}).rate, 0.0, 1e-12);  // floored at zero
    EXPECT_THROW(passive_to_secure(net, th, {11}), InvalidArgument);
    EXPECT_THROW(passive_to_secure(testnet::star(5, 2.0), th, {1}), InvalidArgument);
}

TEST(PassiveToSecure, NonUniformThresholdsUseTheWorstSubset) {
    const auto net = testnet::star(3);
    const ThresholdMap th({0.5, 0.1, 0.3, 0.3, 0.2, 0.4});
    const auto r = passive_to_secure(net, th, {2});
    EXPECT_NEAR(r.leakage, 0.9, 1e-12);
    EXPECT_NEAR(r.rate, std::max(0.0, r.passive_capacity - 0.9), 1e-12);
}

TEST(SecureToPassive, SingleBeamShare) {
    const auto net = testnet::star(4);
    const auto r = secure_to_passive(net, ThresholdMap::uniform(net, 0.2), 1);
    EXPECT_EQ(r.disjoint_paths, 4);
    EXPECT_NEAR(r.rate, 4 * 0.2, 1e-12);  // min(1/4, 0.2) per path
    EXPECT_TRUE(r.check.ok());
    const auto loose = secure_to_passive(net, ThresholdMap::uniform(net, 0.5), 1);
    EXPECT_NEAR(loose.rate, 1.0, 1e-12);
}

TEST(SecureToPassive, MultiBeamShare) {
    const auto net = generate_random(6, TopologySpec::parallel(6), {1.0, 0.0}, 1, 3);
    const auto r = secure_to_passive(net, ThresholdMap::uniform(net, 1.0), 3);
    EXPECT_EQ(r.disjoint_paths, 6);
    EXPECT_NEAR(r.rate, 3.0, 1e-12);  // 6 paths at 3/6 each
    EXPECT_TRUE(r.check.ok());
}

TEST(SecureToPassive, NeverExceedsPassiveCapacity) {
    std::mt19937_64 rng(59);
    for (int it = 0; it < 60; ++it) {
        const auto net = testnet::random_network(rng, 6, 0.5, true);
        const auto th = testnet::random_thresholds(rng, net);
        const auto r = secure_to_passive(net, th, 1);
        EXPECT_LE(r.rate, passive_capacity(net, th).rate + 1e-9);
        EXPECT_TRUE(r.check.ok());
    }
}
