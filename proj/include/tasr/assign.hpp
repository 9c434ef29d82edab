#pragma once

#include <functional>
#include <optional>

#include "tasr/latency.hpp"

namespace tasr {

struct SolverConfig {
    int max_iterations = 500;
    double relative_gap_target = 1e-6;
    double line_search_tolerance = 1e-9;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssignmentResult {
    FlowVector flows;
    double objective = 0;       // total congestion Sum f*tau(f) including background interaction
    double relative_gap = 0;
    int iterations = 0;
    bool converged = false;
};

/// Demand loaded entirely on each commodity's cheapest path under fixed costs.
FlowVector all_or_nothing(const Network& net, const PathIndex& idx, const std::vector<Commodity>& demands,
                          const std::vector<double>& edge_costs);

/// Bisection root of a nondecreasing directional derivative on [0,1], clamped.
double line_search(const std::function<double(double)>& derivative, double tolerance);

/// Frank-Wolfe convergence measure under the given fixed costs.
double relative_gap(const Network& net, const PathIndex& idx, const std::vector<Commodity>& demands,
                    const FlowVector& flows, const std::vector<double>& edge_costs);

/// System optimum (complete compliance): minimizes added total travel time over
/// the path set, on top of optional fixed background edge flows.
AssignmentResult solve_cc(const Network& net, const PathSet& paths, const std::vector<Commodity>& demands,
                          const SolverConfig& cfg = {},
                          const std::vector<double>* background = nullptr);

/// Wardrop user equilibrium via the Beckmann potential.
AssignmentResult solve_ue(const Network& net, const PathSet& paths, const std::vector<Commodity>& demands,
                          const SolverConfig& cfg = {},
                          const std::vector<double>* background = nullptr);

}  // namespace tasr
