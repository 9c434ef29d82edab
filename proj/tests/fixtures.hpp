#pragma once

#include "tasr/harness.hpp"

namespace fixtures {

using namespace tasr;

// Two routes from 1 to 4 that behave like parallel BPR links of t_ff=10, c=10:
// a direct edge and a two-edge detour whose pieces sum to the same curve.
inline Network twin_link(double t_a = 10, double c_a = 10, double t_b = 10, double c_b = 10) {
    Network net;
    net.edges.push_back({0, 1, 4, t_a, c_a, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({1, 1, 2, t_b / 2, c_b, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({2, 2, 4, t_b / 2, c_b, 0.15, 4, 0, 0, 0, 1});
    net.finalize();
    return net;
}

inline Commodity twin_commodity(double demand) { return {1, 4, demand}; }

inline PathSet twin_paths(const Network& net, double demand = 10) {
    return build_path_set(net, {twin_commodity(demand)}, 4);
}

// Three parallel-equivalent routes 1 -> 2: t_ff 10/12/15, capacity 8/10/12.
inline Network three_link() {
    Network net;
    net.edges.push_back({0, 1, 2, 10, 8, 0.15, 4, 0, 0, 0, 1});    // direct
    net.edges.push_back({1, 1, 3, 6, 10, 0.15, 4, 0, 0, 0, 1});    // via 3
    net.edges.push_back({2, 3, 2, 6, 10, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({3, 1, 4, 7.5, 12, 0.15, 4, 0, 0, 0, 1});  // via 4
    net.edges.push_back({4, 4, 2, 7.5, 12, 0.15, 4, 0, 0, 0, 1});
    net.finalize();
    return net;
}

inline Commodity three_commodity(double demand = 15) { return {1, 2, demand}; }

// 4-node diamond plus a direct edge that loses to the two-hop route.
inline Network diamond() {
    Network net;
    net.edges.push_back({0, 1, 4, 25, 100, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({1, 1, 2, 10, 100, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({2, 2, 4, 10, 100, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({3, 1, 3, 14, 100, 0.15, 4, 0, 0, 0, 1});
    net.edges.push_back({4, 3, 4, 14, 100, 0.15, 4, 0, 0, 0, 1});
    net.finalize();
    return net;
}

inline std::vector<DemandGroup> make_groups(const Network& net, const PathSet& paths,
                                            const std::vector<std::pair<double, double>>& alpha_amount,
                                            int commodity = 0) {
    PathIndex idx = PathIndex::build(paths);
    size_t off = idx.commodity_offset[static_cast<size_t>(commodity)];
    size_t cnt = idx.commodity_count[static_cast<size_t>(commodity)];
    std::vector<double> prior(cnt);
    std::vector<double> zero(net.edges.size(), 0.0);
    for (size_t i = 0; i < cnt; ++i) prior[i] = path_latency(net, idx.paths[off + i], zero);
    std::vector<DemandGroup> out;
    int id = 0;
    for (auto [alpha, amount] : alpha_amount) {
        DemandGroup g;
        g.id = id++;
        g.alpha = alpha;
        g.amount = amount;
        g.commodity = commodity;
        g.prior = prior;
        out.push_back(g);
    }
    return out;
}

inline std::string data_path(const std::string& name) { return std::string(TASR_DATA_DIR) + "/" + name; }

}  // namespace fixtures
