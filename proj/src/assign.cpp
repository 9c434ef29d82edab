#include "tasr/assign.hpp"

#include <algorithm>
#include <cmath>

namespace tasr {

namespace {

// cheapest path of one commodity under fixed edge costs; cost ties resolve
// toward the lexicographically smallest edge-id sequence, like shortest_path
size_t cheapest_path(const PathIndex& idx, size_t commodity, const std::vector<double>& edge_costs) {
    size_t off = idx.commodity_offset[commodity];
    size_t cnt = idx.commodity_count[commodity];
    if (cnt == 0) throw NoPathError("commodity has no paths");
    size_t best = off;
    double best_cost = 0;
    for (EdgeId e : idx.paths[off].edges) best_cost += edge_costs[static_cast<size_t>(e)];
    for (size_t p = off + 1; p < off + cnt; ++p) {
        double c = 0;
        for (EdgeId e : idx.paths[p].edges) c += edge_costs[static_cast<size_t>(e)];
        if (c < best_cost - 1e-12) {
            best = p;
            best_cost = c;
        } else if (c <= best_cost + 1e-12 &&
                   std::lexicographical_compare(idx.paths[p].edges.begin(), idx.paths[p].edges.end(),
                                                idx.paths[best].edges.begin(), idx.paths[best].edges.end())) {
            best = p;
            best_cost = std::min(best_cost, c);
        }
    }
    return best;
}

std::vector<double> add_background(const std::vector<double>& flows, const std::vector<double>* background) {
    if (!background) return flows;
    if (background->size() != flows.size()) throw DataError("background flow size mismatch");
    std::vector<double> out(flows.size());
    for (size_t i = 0; i < flows.size(); ++i) out[i] = flows[i] + (*background)[i];
    return out;
}

struct Objective {
    // step costs drive the AON direction; value() is what descends
    std::function<double(const Edge&, double)> step_cost;
    std::function<double(const Network&, const std::vector<double>&)> value;
};

AssignmentResult frank_wolfe(const Network& net, const PathSet& paths, const std::vector<Commodity>& demands,
                             const SolverConfig& cfg, const std::vector<double>* background,
                             const Objective& obj) {
    if (cfg.max_iterations < 1 || cfg.relative_gap_target <= 0 || cfg.line_search_tolerance <= 0)
        throw DataError("invalid solver configuration");
    PathIndex idx = PathIndex::build(paths);
    if (idx.commodity_count.size() < demands.size()) throw DataError("path set does not cover all commodities");

    auto costs_at = [&](const std::vector<double>& edge_flows) {
        std::vector<double> total = add_background(edge_flows, background);
        std::vector<double> c(net.edges.size());
        for (size_t i = 0; i < net.edges.size(); ++i) c[i] = obj.step_cost(net.edges[i], total[i]);
        return c;
    };
    auto value_at = [&](const std::vector<double>& edge_flows) {
        return obj.value(net, add_background(edge_flows, background));
    };

    bool any_demand = false;
    for (const auto& d : demands)
        if (d.demand > 0) any_demand = true;

    AssignmentResult res;
    if (!any_demand) {
        res.flows = FlowVector::zeros(idx.size(), net.edges.size());
        res.converged = true;
        res.objective = 0;
        return res;
    }

    // initial iterate: all-or-nothing at empty-flow costs
    FlowVector cur = all_or_nothing(net, idx, demands, costs_at(std::vector<double>(net.edges.size(), 0.0)));
    double prev_value = value_at(cur.edge_flows);

    for (int it = 1; it <= cfg.max_iterations; ++it) {
        res.iterations = it;
        std::vector<double> costs = costs_at(cur.edge_flows);
        FlowVector target = all_or_nothing(net, idx, demands, costs);

        res.relative_gap = relative_gap(net, idx, demands, cur, costs);
        if (res.relative_gap <= cfg.relative_gap_target) {
            res.converged = true;
            break;
        }

        // derivative of the objective along (target - cur) at step s
        auto deriv = [&](double s) {
            double d = 0;
            std::vector<double> mix(net.edges.size());
            for (size_t e = 0; e < mix.size(); ++e)
                mix[e] = cur.edge_flows[e] + s * (target.edge_flows[e] - cur.edge_flows[e]);
            std::vector<double> c = costs_at(mix);
            for (size_t e = 0; e < mix.size(); ++e) d += c[e] * (target.edge_flows[e] - cur.edge_flows[e]);
            return d;
        };
        double step = line_search(deriv, cfg.line_search_tolerance);
        if (step <= 0) {
            res.converged = res.relative_gap <= cfg.relative_gap_target;
            break;
        }
        for (size_t p = 0; p < cur.path_flows.size(); ++p)
            cur.path_flows[p] += step * (target.path_flows[p] - cur.path_flows[p]);
        for (size_t e = 0; e < cur.edge_flows.size(); ++e)
            cur.edge_flows[e] += step * (target.edge_flows[e] - cur.edge_flows[e]);

        double v = value_at(cur.edge_flows);
        if (v > prev_value + 1e-12 * std::max(1.0, std::abs(prev_value)))
            throw ConvergenceError("objective increased during Frank-Wolfe descent");
        prev_value = v;
    }

    // clean tiny negatives from floating point mixing
    for (double& f : cur.path_flows) f = std::max(0.0, f);
    cur = make_flow(net, PathIndex::build(paths), cur.path_flows);

    if (!res.converged) res.relative_gap = relative_gap(net, idx, demands, cur, costs_at(cur.edge_flows));
    res.flows = cur;
    std::vector<double> total = add_background(cur.edge_flows, background);
    double with = total_congestion_edges(net, total);
    double base_cong = background ? total_congestion_edges(net, *background) : 0.0;
    res.objective = with - base_cong;
    return res;
}

}  // namespace

FlowVector all_or_nothing(const Network& net, const PathIndex& idx, const std::vector<Commodity>& demands,
                          const std::vector<double>& edge_costs) {
    for (double c : edge_costs)
        if (c < 0 || !std::isfinite(c)) throw DataError("edge costs must be finite and nonnegative");
    FlowVector f = FlowVector::zeros(idx.size(), net.edges.size());
    for (size_t i = 0; i < demands.size(); ++i) {
        if (demands[i].demand <= 0) continue;
        size_t p = cheapest_path(idx, i, edge_costs);
        f.path_flows[p] += demands[i].demand;
        for (EdgeId e : idx.paths[p].edges) f.edge_flows[static_cast<size_t>(e)] += demands[i].demand;
    }
    return f;
}

double line_search(const std::function<double(double)>& derivative, double tolerance) {
    double lo = 0.0, hi = 1.0;
    double dlo = derivative(0.0);
    if (dlo >= 0) return 0.0;
    double dhi = derivative(1.0);
    if (dhi <= 0) return 1.0;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        if (derivative(mid) <= 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double relative_gap(const Network& net, const PathIndex& idx, const std::vector<Commodity>& demands,
                    const FlowVector& flows, const std::vector<double>& edge_costs) {
    (void)net;
    double cur_cost = 0;
    for (size_t e = 0; e < edge_costs.size(); ++e) cur_cost += flows.edge_flows[e] * edge_costs[e];
    double aon_cost = 0;
    for (size_t i = 0; i < demands.size(); ++i) {
        if (demands[i].demand <= 0) continue;
        size_t p = cheapest_path(idx, i, edge_costs);
        double c = 0;
        for (EdgeId e : idx.paths[p].edges) c += edge_costs[static_cast<size_t>(e)];
        aon_cost += demands[i].demand * c;
    }
    if (aon_cost <= 0) return 0.0;
    return std::max(0.0, (cur_cost - aon_cost) / aon_cost);
}

AssignmentResult solve_cc(const Network& net, const PathSet& paths, const std::vector<Commodity>& demands,
                          const SolverConfig& cfg, const std::vector<double>* background) {
    Objective obj;
    obj.step_cost = [](const Edge& e, double f) { return edge_marginal_cost(e, f); };
    obj.value = [](const Network& n, const std::vector<double>& f) { return total_congestion_edges(n, f); };
    return frank_wolfe(net, paths, demands, cfg, background, obj);
}

AssignmentResult solve_ue(const Network& net, const PathSet& paths, const std::vector<Commodity>& demands,
                          const SolverConfig& cfg, const std::vector<double>* background) {
    Objective obj;
    obj.step_cost = [](const Edge& e, double f) { return edge_latency(e, f); };
    obj.value = [](const Network& n, const std::vector<double>& f) { return beckmann_potential(n, f); };
    AssignmentResult res = frank_wolfe(net, paths, demands, cfg, background, obj);

    // Wardrop check: every used path within (1 + gap target) of its commodity minimum
    PathIndex idx = PathIndex::build(paths);
    std::vector<double> total = res.flows.edge_flows;
    if (background)
        for (size_t e = 0; e < total.size(); ++e) total[e] += (*background)[e];
    if (res.converged) {
        for (size_t i = 0; i < demands.size(); ++i) {
            if (demands[i].demand <= 0) continue;
            size_t off = idx.commodity_offset[i], cnt = idx.commodity_count[i];
            double min_lat = std::numeric_limits<double>::infinity();
            for (size_t p = off; p < off + cnt; ++p)
                min_lat = std::min(min_lat, path_latency(net, idx.paths[p], total));
            for (size_t p = off; p < off + cnt; ++p) {
                if (res.flows.path_flows[p] <= 1e-6 * demands[i].demand) continue;
                double lat = path_latency(net, idx.paths[p], total);
                if (lat > min_lat * (1.0 + std::max(cfg.relative_gap_target, 1e-3)) + 1e-9)
                    throw ConvergenceError("used path violates Wardrop condition");
            }
        }
    }
    return res;
}

}  // namespace tasr
