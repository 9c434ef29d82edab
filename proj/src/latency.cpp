#include "tasr/latency.hpp"

#include <cmath>
#include <stdexcept>

namespace tasr {

PathIndex PathIndex::build(const PathSet& ps) {
    PathIndex idx;
    for (const auto& v : ps.per_commodity) {
        idx.commodity_offset.push_back(idx.paths.size());
        idx.commodity_count.push_back(v.size());
        idx.paths.insert(idx.paths.end(), v.begin(), v.end());
    }
    return idx;
}

FlowVector make_flow(const Network& net, const PathIndex& idx, const std::vector<double>& path_flows) {
    if (path_flows.size() != idx.size()) throw DataError("path flow vector size mismatch");
    FlowVector f = FlowVector::zeros(idx.size(), net.edges.size());
    f.path_flows = path_flows;
    for (size_t p = 0; p < idx.size(); ++p) {
        if (path_flows[p] < -1e-9) throw DataError("negative path flow");
        for (EdgeId e : idx.paths[p].edges) f.edge_flows[static_cast<size_t>(e)] += path_flows[p];
    }
    return f;
}

namespace {
// (f/c)^beta, exponentiation by squaring for integer beta
double ratio_pow(double ratio, double beta) {
    double bi;
    if (std::modf(beta, &bi) == 0.0 && beta >= 1 && beta <= 64) {
        long n = static_cast<long>(bi);
        double acc = 1.0, base = ratio;
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }
    return std::pow(ratio, beta);
}
}  // namespace

double edge_latency(const Edge& e, double flow) {
    if (flow < 0) throw DataError("negative edge flow");
    return e.free_flow_time * (1.0 + e.lambda * ratio_pow(flow / e.capacity, e.beta));
}

double edge_marginal_cost(const Edge& e, double flow) {
    if (flow < 0) throw DataError("negative edge flow");
    return e.free_flow_time * (1.0 + e.lambda * (e.beta + 1.0) * ratio_pow(flow / e.capacity, e.beta));
}

double edge_latency_integral(const Edge& e, double flow) {
    if (flow < 0) throw DataError("negative edge flow");
    // t*(f + lambda * f^{beta+1} / ((beta+1) * c^beta))
    return e.free_flow_time * (flow + e.lambda * flow * ratio_pow(flow / e.capacity, e.beta) / (e.beta + 1.0));
}

double path_latency(const Network& net, const Path& p, const std::vector<double>& edge_flows) {
    if (edge_flows.size() != net.edges.size()) throw DataError("edge flow vector size mismatch");
    double t = 0;
    for (EdgeId e : p.edges) t += edge_latency(net.edge(e), edge_flows[static_cast<size_t>(e)]);
    return t;
}

double total_congestion_edges(const Network& net, const std::vector<double>& edge_flows) {
    double c = 0;
    for (size_t i = 0; i < net.edges.size(); ++i)
        c += edge_flows[i] * edge_latency(net.edges[i], edge_flows[i]);
    return c;
}

double total_congestion(const Network& net, const PathIndex& idx, const FlowVector& f) {
    double by_path = 0;
    for (size_t p = 0; p < idx.size(); ++p)
        by_path += f.path_flows[p] * path_latency(net, idx.paths[p], f.edge_flows);
    double by_edge = total_congestion_edges(net, f.edge_flows);
#ifndef NDEBUG
    double scale = std::max(1.0, std::max(std::abs(by_path), std::abs(by_edge)));
    if (std::abs(by_path - by_edge) > 1e-9 * scale)
        throw DataError("path/edge congestion mismatch: " + std::to_string(by_path) + " vs " + std::to_string(by_edge));
#endif
    return by_edge;
}

double beckmann_potential(const Network& net, const std::vector<double>& edge_flows) {
    double v = 0;
    for (size_t i = 0; i < net.edges.size(); ++i) v += edge_latency_integral(net.edges[i], edge_flows[i]);
    return v;
}

}  // namespace tasr
