#include <doctest.h>

#include "fixtures.hpp"

using namespace tasr;

TEST_CASE("BPR edge latency") {
    Edge e{0, 1, 2, 10, 10, 0.15, 4, 0, 0, 0, 1};
    CHECK(edge_latency(e, 0) == doctest::Approx(10.0));
    CHECK(edge_latency(e, 10) == doctest::Approx(11.5));
    CHECK(edge_latency(e, 5) == doctest::Approx(10.09375));
    CHECK_THROWS_AS((void)edge_latency(e, -1), DataError);
}

TEST_CASE("path latency sums edge latencies") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    PathIndex idx = PathIndex::build(ps);

    SUBCASE("single-edge path at zero flow") {
        std::vector<double> flows(net.edges.size(), 0.0);
        CHECK(path_latency(net, idx.paths[0], flows) == doctest::Approx(10.0));
    }
    SUBCASE("two edges, one congested") {
        // both pieces of the detour have t=5, c=10; flows 10 and 0 on a t=10,c=10
        // pair of equivalent edges give 11.5 + 10 on the direct construction
        Edge a{0, 1, 2, 10, 10, 0.15, 4, 0, 0, 0, 1};
        Edge b{1, 2, 3, 10, 10, 0.15, 4, 0, 0, 0, 1};
        Network two;
        two.edges = {a, b};
        two.finalize();
        Path p;
        p.edges = {0, 1};
        CHECK(path_latency(two, p, {10, 0}) == doctest::Approx(21.5));
    }
    SUBCASE("multi-edge path matches per-edge summation") {
        Network d = fixtures::diamond();
        Path p;
        p.edges = {1, 2};
        std::vector<double> flows{3, 7, 7, 1, 1};
        double manual = edge_latency(d.edge(1), 7) + edge_latency(d.edge(2), 7);
        CHECK(path_latency(d, p, flows) == doctest::Approx(manual).epsilon(1e-12));
    }
    SUBCASE("three-edge chain matches hand summation") {
        Network chain;
        chain.edges.push_back({0, 1, 2, 4, 12, 0.15, 4, 0, 0, 0, 1});
        chain.edges.push_back({1, 2, 3, 7, 9, 0.15, 4, 0, 0, 0, 1});
        chain.edges.push_back({2, 3, 4, 5, 20, 0.15, 4, 0, 0, 0, 1});
        chain.finalize();
        Path p;
        p.edges = {0, 1, 2};
        std::vector<double> flows{6, 6, 6};
        double manual = 0;
        for (EdgeId e : p.edges) manual += edge_latency(chain.edge(e), 6);
        CHECK(path_latency(chain, p, flows) == doctest::Approx(manual).epsilon(1e-12));
        CHECK(path_is_valid(chain, p, 1, 4));
    }
}

TEST_CASE("total congestion") {
    Network net = fixtures::twin_link();
    PathSet ps = fixtures::twin_paths(net);
    PathIndex idx = PathIndex::build(ps);
    REQUIRE(idx.size() == 2);

    SUBCASE("zero flow is zero") {
        FlowVector f = make_flow(net, idx, {0, 0});
        CHECK(total_congestion(net, idx, f) == doctest::Approx(0.0));
    }
    SUBCASE("even split") {
        FlowVector f = make_flow(net, idx, {5, 5});
        CHECK(total_congestion(net, idx, f) == doctest::Approx(100.9375));
    }
    SUBCASE("everything on one route") {
        FlowVector f = make_flow(net, idx, {10, 0});
        CHECK(total_congestion(net, idx, f) == doctest::Approx(115.0));
    }
}

TEST_CASE("beckmann potential") {
    SUBCASE("zero flow") {
        Network net = fixtures::twin_link();
        CHECK(beckmann_potential(net, std::vector<double>(net.edges.size(), 0.0)) == doctest::Approx(0.0));
    }
    SUBCASE("single edge direct evaluation") {
        Edge e{0, 1, 2, 10, 10, 0.15, 4, 0, 0, 0, 1};
        Network net;
        net.edges = {e};
        net.finalize();
        CHECK(beckmann_potential(net, {10}) == doctest::Approx(103.0));
    }
    SUBCASE("even split beats concentration") {
        Network net = fixtures::twin_link();
        PathSet ps = fixtures::twin_paths(net);
        PathIndex idx = PathIndex::build(ps);
        FlowVector even = make_flow(net, idx, {5, 5});
        FlowVector lump = make_flow(net, idx, {10, 0});
        CHECK(beckmann_potential(net, even.edge_flows) < beckmann_potential(net, lump.edge_flows));
    }
}

TEST_CASE("latency monotone in flow") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        Edge e{0, 1, 2, 1 + 20 * rng.next_double(), 1 + 50 * rng.next_double(), 0.3 * rng.next_double(),
               1 + 7 * rng.next_double(), 0, 0, 0, 1};
        double f1 = 100 * rng.next_double();
        double f2 = f1 + 100 * rng.next_double();
        CHECK(edge_latency(e, f1) <= edge_latency(e, f2) + 1e-12);
    }
}

TEST_CASE("path and edge congestion agree on random feasible flows") {
    Network net = fixtures::three_link();
    PathSet ps = build_path_set(net, {fixtures::three_commodity()}, 8);
    PathIndex idx = PathIndex::build(ps);
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> pf(idx.size());
        for (auto& v : pf) v = 20 * rng.next_double();
        FlowVector f = make_flow(net, idx, pf);
        double by_path = 0;
        for (size_t p = 0; p < idx.size(); ++p)
            by_path += f.path_flows[p] * path_latency(net, idx.paths[p], f.edge_flows);
        double by_edge = total_congestion_edges(net, f.edge_flows);
        CHECK(by_path == doctest::Approx(by_edge).epsilon(1e-9));
    }
}

TEST_CASE("beckmann gradient matches edge latency by central difference") {
    Network net = fixtures::three_link();
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> flows(net.edges.size());
        for (auto& v : flows) v = 1 + 30 * rng.next_double();
        size_t e = rng.next_below(net.edges.size());
        double h = 1e-4;
        std::vector<double> up = flows, dn = flows;
        up[e] += h;
        dn[e] -= h;
        double fd = (beckmann_potential(net, up) - beckmann_potential(net, dn)) / (2 * h);
        double lat = edge_latency(net.edges[e], flows[e]);
        CHECK(fd == doctest::Approx(lat).epsilon(1e-4));
    }
}
