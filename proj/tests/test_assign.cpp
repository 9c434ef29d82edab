#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace tasr;

namespace {

// brute-force grid search over splits of r across the three routes
double three_link_grid_minimum(const Network& net, const PathIndex& idx, double r, double step) {
    double best = 1e300;
    for (double f1 = 0; f1 <= r + 1e-9; f1 += step) {
        for (double f2 = 0; f2 + f1 <= r + 1e-9; f2 += step) {
            double f3 = r - f1 - f2;
            FlowVector f = make_flow(net, idx, {f1, f2, f3});
            best = std::min(best, total_congestion_edges(net, f.edge_flows));
        }
    }
    return best;
}

}  // namespace

TEST_CASE("twin-link symmetric optimum and equilibrium coincide at the even split") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    std::vector<Commodity> demands{fixtures::twin_commodity(10)};

    AssignmentResult cc = solve_cc(net, ps, demands);
    AssignmentResult ue = solve_ue(net, ps, demands);
    for (const auto* res : {&cc, &ue}) {
        REQUIRE(res->flows.path_flows.size() == 2);
        CHECK(res->flows.path_flows[0] == doctest::Approx(5.0).epsilon(1e-4));
        CHECK(res->flows.path_flows[1] == doctest::Approx(5.0).epsilon(1e-4));
        CHECK(res->objective == doctest::Approx(100.9375).epsilon(1e-6));
        CHECK(res->converged);
    }
    // both path latencies equal at the equilibrium
    PathIndex idx = PathIndex::build(ps);
    double l0 = path_latency(net, idx.paths[0], ue.flows.edge_flows);
    double l1 = path_latency(net, idx.paths[1], ue.flows.edge_flows);
    CHECK(l0 == doctest::Approx(l1).epsilon(1e-6));
}

TEST_CASE("single-route demand is forced") {
    Network net;
    net.edges.push_back({0, 1, 2, 10, 10, 0.15, 4, 0, 0, 0, 1});
    net.finalize();
    PathSet ps = build_path_set(net, {{1, 2, 5}}, 4);
    AssignmentResult cc = solve_cc(net, ps, {{1, 2, 5}});
    CHECK(cc.flows.path_flows[0] == doctest::Approx(5.0));
}

TEST_CASE("three-link optimum within half a percent of the grid-search oracle") {
    Network net = fixtures::three_link();
    PathSet ps = build_path_set(net, {fixtures::three_commodity()}, 8);
    PathIndex idx = PathIndex::build(ps);
    REQUIRE(idx.size() == 3);

    double oracle = three_link_grid_minimum(net, idx, 15, 0.1);
    AssignmentResult cc = solve_cc(net, ps, {fixtures::three_commodity()});
    CHECK(cc.converged);
    CHECK(cc.objective <= oracle * 1.005);
    CHECK(cc.objective >= oracle * 0.995);
}

TEST_CASE("user equilibrium satisfies Wardrop on the three-link fixture") {
    Network net = fixtures::three_link();
    PathSet ps = build_path_set(net, {fixtures::three_commodity()}, 8);
    PathIndex idx = PathIndex::build(ps);
    AssignmentResult ue = solve_ue(net, ps, {fixtures::three_commodity()});
    CHECK(ue.converged);

    double min_lat = 1e300, max_used = 0;
    for (size_t p = 0; p < idx.size(); ++p) {
        double lat = path_latency(net, idx.paths[p], ue.flows.edge_flows);
        min_lat = std::min(min_lat, lat);
        if (ue.flows.path_flows[p] > 1e-4) max_used = std::max(max_used, lat);
    }
    CHECK(max_used <= min_lat * (1 + 1e-3));

    // oracle: bisection on the two Wardrop equations tau1(f1)=tau2(f2)=tau3(r-f1-f2)
    auto tau = [&](size_t route, double f) {
        double t = route == 0 ? 10 : route == 1 ? 12 : 15;
        double c = route == 0 ? 8 : route == 1 ? 10 : 12;
        return t * (1 + 0.15 * std::pow(f / c, 4));
    };
    // inner: given f1, split the rest between routes 2,3 to equalize their latencies
    auto split23 = [&](double rest) {
        double lo = 0, hi = rest;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            if (tau(1, mid) < tau(2, rest - mid))
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double lo = 0, hi = 15;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double f2 = split23(15 - mid);
        double other = std::min(tau(1, f2), tau(2, 15 - mid - f2));
        if (tau(0, mid) < other)
            lo = mid;
        else
            hi = mid;
    }
    double f1_star = 0.5 * (lo + hi);
    CHECK(ue.flows.path_flows[0] == doctest::Approx(f1_star).epsilon(2e-3));
}

TEST_CASE("equilibrium sits at a corner when one route dominates") {
    // route A: t=10, huge capacity; route B: t=5, c=10: tau_B(10)=5.75 < 10
    Network net = fixtures::twin_link(10, 1000, 5, 10);
    PathSet ps = build_path_set(net, {{1, 4, 10}}, 4);
    AssignmentResult ue = solve_ue(net, ps, {{1, 4, 10}});
    PathIndex idx = PathIndex::build(ps);
    // enumeration orders the t=5 detour first
    size_t detour = path_free_flow_time(net, idx.paths[0]) < path_free_flow_time(net, idx.paths[1]) ? 0 : 1;
    CHECK(ue.flows.path_flows[detour] == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("all or nothing loading") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    PathIndex idx = PathIndex::build(ps);

    SUBCASE("cheaper route takes everything") {
        FlowVector f = all_or_nothing(net, idx, {fixtures::twin_commodity(7)}, {10, 6, 6});
        CHECK(f.path_flows[0] == doctest::Approx(7.0));
        CHECK(f.path_flows[1] == doctest::Approx(0.0));
    }
    SUBCASE("tie goes to the first enumerated path") {
        FlowVector f = all_or_nothing(net, idx, {fixtures::twin_commodity(7)}, {10, 5, 5});
        CHECK(f.path_flows[0] == doctest::Approx(7.0));
    }
    SUBCASE("commodities load independently") {
        Network d = fixtures::diamond();
        std::vector<Commodity> cs{{1, 4, 3}, {2, 4, 5}};
        PathSet dps = build_path_set(d, cs, 8);
        PathIndex didx = PathIndex::build(dps);
        std::vector<double> costs;
        for (const auto& e : d.edges) costs.push_back(e.free_flow_time);
        FlowVector f = all_or_nothing(d, didx, cs, costs);
        // oracle: per-commodity shortest path
        for (size_t c = 0; c < cs.size(); ++c) {
            Path sp = shortest_path(d, costs, cs[c].source, cs[c].destination, static_cast<int>(c));
            double placed = 0;
            for (size_t p = didx.commodity_offset[c]; p < didx.commodity_offset[c] + didx.commodity_count[c]; ++p)
                if (didx.paths[p].edges == sp.edges) placed = f.path_flows[p];
            CHECK(placed == doctest::Approx(cs[c].demand));
        }
    }
}

TEST_CASE("line search") {
    SUBCASE("positive derivative at zero stays put") {
        CHECK(line_search([](double) { return 1.0; }, 1e-9) == doctest::Approx(0.0));
    }
    SUBCASE("negative derivative at one goes all the way") {
        CHECK(line_search([](double) { return -1.0; }, 1e-9) == doctest::Approx(1.0));
    }
    SUBCASE("symmetric quartic roots at one half") {
        // twin-link after the first all-or-nothing iterate: moving from (10,0)
        // toward (0,10); symmetry puts the optimum at s = 1/2
        Network net = fixtures::twin_link();
        PathSet ps = fixtures::twin_paths(net);
        PathIndex idx = PathIndex::build(ps);
        auto deriv = [&](double s) {
            FlowVector f = make_flow(net, idx, {10 * (1 - s), 10 * s});
            double d = 0;
            std::vector<double> target{0, 10};
            std::vector<double> cur{10, 0};
            for (size_t p = 0; p < 2; ++p) {
                double marginal = 0;
                for (EdgeId e : idx.paths[p].edges)
                    marginal += edge_marginal_cost(net.edge(e), f.edge_flows[static_cast<size_t>(e)]);
                d += marginal * (target[p] - cur[p]);
            }
            return d;
        };
        CHECK(line_search(deriv, 1e-9) == doctest::Approx(0.5).epsilon(1e-6));
    }
}

TEST_CASE("relative gap") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    PathIndex idx = PathIndex::build(ps);
    std::vector<Commodity> demands{fixtures::twin_commodity(10)};

    SUBCASE("all-or-nothing optimal flow has zero gap") {
        std::vector<double> costs{10, 6, 6};
        FlowVector f = all_or_nothing(net, idx, demands, costs);
        CHECK(relative_gap(net, idx, demands, f, costs) == doctest::Approx(0.0));
    }
    SUBCASE("concentrated flow has positive gap at its own latencies") {
        FlowVector f = make_flow(net, idx, {10, 0});
        std::vector<double> costs(net.edges.size());
        for (size_t e = 0; e < costs.size(); ++e) costs[e] = edge_latency(net.edges[e], f.edge_flows[e]);
        CHECK(relative_gap(net, idx, demands, f, costs) > 0.0);
    }
    SUBCASE("converged equilibrium has tiny gap") {
        AssignmentResult ue = solve_ue(net, ps, demands);
        CHECK(ue.relative_gap <= 1e-6);
    }
}

TEST_CASE("optimum dominates random feasible flows") {
    Network net = fixtures::three_link();
    PathSet ps = build_path_set(net, {fixtures::three_commodity()}, 8);
    PathIndex idx = PathIndex::build(ps);
    AssignmentResult cc = solve_cc(net, ps, {fixtures::three_commodity()});
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        double a = 15 * rng.next_double();
        double b = (15 - a) * rng.next_double();
        FlowVector f = make_flow(net, idx, {a, b, 15 - a - b});
        CHECK(cc.objective <= total_congestion_edges(net, f.edge_flows) + 1e-9);
    }
}

TEST_CASE("empty demand with background returns zero flow and objective") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    std::vector<double> background(net.edges.size(), 3.0);
    AssignmentResult cc = solve_cc(net, ps, {fixtures::twin_commodity(0)}, {}, &background);
    CHECK(cc.objective == doctest::Approx(0.0));
    for (double f : cc.flows.path_flows) CHECK(f == doctest::Approx(0.0));
}

TEST_CASE("background flows shift the optimum") {
    // background congestion on the direct edge pushes new demand to the detour
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    std::vector<double> background(net.edges.size(), 0.0);
    background[0] = 10.0;  // direct edge pre-loaded
    AssignmentResult cc = solve_cc(net, ps, {fixtures::twin_commodity(10)}, {}, &background);
    CHECK(cc.flows.path_flows[1] > cc.flows.path_flows[0]);
}
