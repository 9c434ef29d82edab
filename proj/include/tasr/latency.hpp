#pragma once

#include "tasr/net.hpp"

namespace tasr {

/// Path flows over a PathSet plus the edge flows they induce.
/// Path order follows PathSet enumeration order (commodity-major).
struct FlowVector {
    std::vector<double> path_flows;            // aligned with flattened PathSet
    std::vector<double> edge_flows;            // aligned with Network::edges

    static FlowVector zeros(size_t n_paths, size_t n_edges) {
        FlowVector f;
        f.path_flows.assign(n_paths, 0.0);
        f.edge_flows.assign(n_edges, 0.0);
        return f;
    }
};

/// Flattened view of a PathSet with commodity offsets, shared by the solvers.
struct PathIndex {
    std::vector<Path> paths;                 // flattened
    std::vector<size_t> commodity_offset;    // offset of each commodity's first path
    std::vector<size_t> commodity_count;

    static PathIndex build(const PathSet& ps);
    size_t size() const { return paths.size(); }
};

FlowVector make_flow(const Network& net, const PathIndex& idx, const std::vector<double>& path_flows);

/// BPR latency t_ff * (1 + lambda * (f/c)^beta).
double edge_latency(const Edge& e, double flow);

/// Marginal (system) cost t_ff * (1 + lambda*(beta+1)*(f/c)^beta).
double edge_marginal_cost(const Edge& e, double flow);

/// Antiderivative of edge_latency from 0 to flow.
double edge_latency_integral(const Edge& e, double flow);

double path_latency(const Network& net, const Path& p, const std::vector<double>& edge_flows);

/// Total vehicle-minutes, computed path-wise and edge-wise and cross-checked.
double total_congestion(const Network& net, const PathIndex& idx, const FlowVector& f);

/// Edge-based congestion only (usable without path bookkeeping).
double total_congestion_edges(const Network& net, const std::vector<double>& edge_flows);

double beckmann_potential(const Network& net, const std::vector<double>& edge_flows);

}  // namespace tasr
