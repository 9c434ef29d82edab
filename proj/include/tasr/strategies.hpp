#pragma once

#include <map>

#include "tasr/assign.hpp"
#include "tasr/rng.hpp"

namespace tasr {

/// A homogeneous traveler group: one trust level, one prior belief.
struct DemandGroup {
    int id = 0;
    double amount = 0;                 // vehicles/hour
    double alpha = 0;                  // acceptance probability in [0,1]
    std::vector<double> prior;         // believed latency per path of its commodity
    int commodity = 0;
};

/// One path recommendation for (part of) a demand group.
struct Recommendation {
    int group_id = 0;
    int part = 0;          // split index within the group, 0 when unsplit
    double amount = 0;
    size_t path = 0;       // flattened PathIndex position
};

struct RecommendationProfile {
    std::vector<Recommendation> recommendations;
    FlowVector planned_flow;          // anticipated flow including predicted selfish spill
    FlowVector opt_flow;              // f* of the complete-compliance program
    double cc_objective = 0;          // total congestion of opt_flow (plus background interaction)
    std::vector<double> controllable; // per-path planned flow the system controls (recommended mass
                                      // weighted by predicted acceptance); opt-restriction subject
};

struct StrategyOutcome {
    FlowVector realized_flow;
    double congestion = 0;
    std::map<int, size_t> per_group_choice;     // dominant (largest-mass) chosen path per group
    std::map<int, double> accepted;             // accepted fraction of the group's recommended mass
    std::map<int, double> chosen_latency;       // flow-weighted realized latency of the group's choices
};

enum class ResponseMode { bernoulli, expected };

struct StrategyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// argmin of the group's prior; ties toward the smaller path index.
size_t selfish_path(const DemandGroup& g, const PathIndex& idx);

double noncompliant_fraction(const std::vector<DemandGroup>& groups);

/// Greedy trust-aware recommendation for one commodity (all groups share it).
RecommendationProfile tasr_single(const Network& net, const PathSet& paths, std::vector<DemandGroup> groups,
                                  const SolverConfig& cfg = {}, const std::vector<double>* background = nullptr);

/// Multi-commodity wrapper: commodities in descending noncompliant fraction,
/// earlier planned edge flows become background for later commodities.
RecommendationProfile tasr_multi(const Network& net, const PathSet& paths,
                                 const std::vector<std::vector<DemandGroup>>& per_commodity,
                                 const SolverConfig& cfg = {});

// Baseline Stackelberg strategies. Groups with alpha >= 0.5 are treated as
// compliant, the rest get no recommendation.
RecommendationProfile llf(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                          const SolverConfig& cfg = {});
RecommendationProfile scale(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                            const SolverConfig& cfg = {});
RecommendationProfile ascale(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                             const SolverConfig& cfg = {});
RecommendationProfile aloof(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                            const SolverConfig& cfg = {});

RecommendationProfile run_strategy(const std::string& name, const Network& net, const PathSet& paths,
                                   const std::vector<std::vector<DemandGroup>>& per_commodity,
                                   const SolverConfig& cfg = {});

/// Stochastic (or expected) response of the demand to a recommendation profile.
StrategyOutcome simulate_response(const Network& net, const PathSet& paths,
                                  const RecommendationProfile& profile, const std::vector<DemandGroup>& groups,
                                  ResponseMode mode, Rng rng);

/// Exhaustive best response over whole-group recommendation profiles,
/// evaluated in expected mode. Tractable only on tiny instances.
RecommendationProfile exact_best_response(const Network& net, const PathSet& paths,
                                          const std::vector<DemandGroup>& groups,
                                          const SolverConfig& cfg = {});

double efficiency_ratio(const StrategyOutcome& outcome, double cc_objective);

bool is_subflow(const FlowVector& f1, const FlowVector& f2, double tol = 1e-9);

}  // namespace tasr
