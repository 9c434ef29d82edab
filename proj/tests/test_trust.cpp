#include <doctest.h>

#include "fixtures.hpp"

using namespace tasr;

TEST_CASE("regret is a signed latency difference") {
    CHECK(regret(12, 10) == doctest::Approx(2.0));
    CHECK(regret(10, 10) == doctest::Approx(0.0));
    CHECK(regret(9.5, 10) == doctest::Approx(-0.5));
}

TEST_CASE("trust update examples") {
    CHECK(update_trust(0.5, 3.0, 0.25) == doctest::Approx(0.25));
    CHECK(update_trust(0.9, -1.0, 0.25) == doctest::Approx(1.0));
    CHECK(update_trust(0.0, 1.0, 0.25) == doctest::Approx(0.0));
}

TEST_CASE("trust update laws under randomized probing") {
    Rng rng(31337);
    for (int i = 0; i < 100000; ++i) {
        double alpha = rng.next_double();
        double eps = 0.01 + 0.99 * rng.next_double();
        double b = (rng.next_double() - 0.5) * 20;
        if (rng.next_below(20) == 0) b = 0;
        double after = update_trust(alpha, b, eps);
        // clamping
        CHECK(after >= 0.0);
        CHECK(after <= 1.0);
        // step quantization up to clamping
        double step = std::abs(after - alpha);
        bool clamped = (after == 0.0 && alpha - eps < 0) || (after == 1.0 && alpha + eps > 1);
        if (!clamped) CHECK((step == doctest::Approx(0.0) || step == doctest::Approx(eps)));
        // monotone response
        if (b < 0) CHECK(after >= alpha);
        if (b > 0) CHECK(after <= alpha);
        if (b == 0) CHECK(after == alpha);
    }
}

TEST_CASE("repeated interaction bookkeeping") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    SUBCASE("fully trusting groups stay in range and history is complete") {
        auto groups = fixtures::make_groups(net, ps, {{1.0, 10}});
        TrustSimConfig cfg;
        cfg.interactions = 12;
        cfg.seed = 4;
        TrustState ts = repeated_interaction(net, ps, {groups}, cfg);
        CHECK(ts.history.size() == 12);
        for (const auto& h : ts.history) {
            CHECK(h.alpha_after >= 0.0);
            CHECK(h.alpha_after <= 1.0);
        }
    }
    SUBCASE("deterministic per seed") {
        auto groups = fixtures::make_groups(net, ps, {{0.5, 10}});
        TrustSimConfig cfg;
        cfg.interactions = 8;
        cfg.seed = 11;
        TrustState a = repeated_interaction(net, ps, {groups}, cfg);
        TrustState b = repeated_interaction(net, ps, {groups}, cfg);
        REQUIRE(a.history.size() == b.history.size());
        for (size_t i = 0; i < a.history.size(); ++i) {
            CHECK(a.history[i].alpha_after == b.history[i].alpha_after);
            CHECK(a.history[i].regret == b.history[i].regret);
        }
    }
    SUBCASE("unknown strategy is rejected") {
        auto groups = fixtures::make_groups(net, ps, {{0.5, 10}});
        TrustSimConfig cfg;
        cfg.strategy = "mystery";
        CHECK_THROWS_AS((void)repeated_interaction(net, ps, {groups}, cfg), StrategyError);
    }
    SUBCASE("trust steps never exceed epsilon") {
        auto groups = fixtures::make_groups(net, ps, {{0.25, 4}, {0.5, 6}});
        TrustSimConfig cfg;
        cfg.interactions = 20;
        cfg.seed = 21;
        TrustState ts = repeated_interaction(net, ps, {groups}, cfg);
        for (const auto& h : ts.history)
            CHECK(std::abs(h.alpha_after - h.alpha_before) <= cfg.epsilon + 1e-12);
    }
}

// Known not to hold on the shipped subnetwork: with regret defined as a
// difference of realized latencies, a strategy that reliably overloads the
// prior-best path (aloof) makes its own recommendations measure favorably
// every seed, while tasr's tighter outcomes sometimes measure slightly worse.
// Kept as a visible, non-gating check; see README, "Known limits".
TEST_CASE("single-interaction trust: tasr at least as persuasive as aloof" * doctest::may_fail()) {
    Network net = load_network_file(fixtures::data_path("sf_20_10_subnet.tntp"));
    std::vector<Commodity> cs{{20, 10, 0}};
    PathSet ps = build_path_set(net, cs, 16);
    PathIndex idx = PathIndex::build(ps);
    size_t off = idx.commodity_offset[0], cnt = idx.commodity_count[0];
    std::vector<double> prior(cnt);
    std::vector<double> zero(net.edges.size(), 0.0);
    for (size_t i = 0; i < cnt; ++i) prior[i] = path_latency(net, idx.paths[off + i], zero);

    double r = 5.0 * static_cast<double>(net.edges.size());
    auto classes = ExperimentConfig::default_trust_classes();
    std::vector<DemandGroup> groups;
    int id = 0;
    for (auto [alpha, share] : classes) groups.push_back({id++, share * r, alpha, prior, 0});

    double mean_tasr = 0, mean_aloof = 0;
    const int seeds = 500;
    for (int s = 0; s < seeds; ++s) {
        for (const char* strat : {"tasr", "aloof"}) {
            RecommendationProfile prof = run_strategy(strat, net, ps, {groups});
            StrategyOutcome out = simulate_response(net, ps, prof, groups, ResponseMode::bernoulli,
                                                    Rng::stream(1234, strat, s));
            double mean_after = 0;
            for (const auto& g : groups) {
                size_t pb = selfish_path(g, idx);
                double prior_best = path_latency(net, idx.paths[pb], out.realized_flow.edge_flows);
                double b = regret(out.chosen_latency.at(g.id), prior_best);
                mean_after += update_trust(g.alpha, b, 0.25);
            }
            mean_after /= static_cast<double>(groups.size());
            (strat == std::string("tasr") ? mean_tasr : mean_aloof) += mean_after;
        }
    }
    CHECK(mean_tasr / seeds >= mean_aloof / seeds);
}
