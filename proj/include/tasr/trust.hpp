#pragma once

#include "tasr/strategies.hpp"

namespace tasr {

struct TrustRecord {
    int interaction = 0;
    int group_id = 0;
    double alpha_before = 0;
    double alpha_after = 0;
    double regret = 0;       // minutes, signed
    double accepted = 0;     // accepted fraction of the group's recommended mass
};

struct TrustState {
    std::map<int, double> alpha;              // per-group trust
    double epsilon = 0.25;
    std::vector<TrustRecord> history;
    std::vector<double> congestion;           // realized vehicle-minutes per interaction
};

/// Signed regret: realized latency of the chosen path minus realized latency of
/// the group's prior-best path. Negative means the interaction beat the plan.
double regret(double chosen_latency, double prior_best_latency);

/// Fixed-step trust update: regret pulls alpha down by epsilon, negative regret
/// pushes it up, zero holds; result clamped to [0,1].
double update_trust(double alpha, double regret_value, double epsilon);

struct TrustSimConfig {
    std::string strategy = "tasr";
    int interactions = 1;
    double epsilon = 0.25;
    ResponseMode mode = ResponseMode::bernoulli;
    uint64_t seed = 0;
    SolverConfig solver;
};

/// Repeated interaction loop: recompute the strategy with current trust values,
/// simulate the response, update every group's trust from its realized regret.
TrustState repeated_interaction(const Network& net, const PathSet& paths,
                                std::vector<std::vector<DemandGroup>> per_commodity, const TrustSimConfig& cfg);

}  // namespace tasr
