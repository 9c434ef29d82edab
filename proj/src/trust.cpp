#include "tasr/trust.hpp"

#include <algorithm>
#include <cmath>

namespace tasr {

double regret(double chosen_latency, double prior_best_latency) {
    if (chosen_latency < 0 || prior_best_latency < 0) throw DataError("latencies must be nonnegative");
    return chosen_latency - prior_best_latency;
}

double update_trust(double alpha, double regret_value, double epsilon) {
    if (alpha < 0 || alpha > 1) throw DataError("alpha outside [0,1]");
    if (epsilon <= 0) throw DataError("epsilon must be positive");
    if (regret_value < 0) return std::min(1.0, alpha + epsilon);
    if (regret_value > 0) return std::max(0.0, alpha - epsilon);
    return alpha;
}

TrustState repeated_interaction(const Network& net, const PathSet& paths,
                                std::vector<std::vector<DemandGroup>> per_commodity, const TrustSimConfig& cfg) {
    if (cfg.interactions < 1) throw DataError("interactions must be >= 1");
    PathIndex idx = PathIndex::build(paths);

    TrustState state;
    state.epsilon = cfg.epsilon;
    for (const auto& v : per_commodity)
        for (const auto& g : v) state.alpha[g.id] = g.alpha;

    for (int it = 1; it <= cfg.interactions; ++it) {
        for (auto& v : per_commodity)
            for (auto& g : v) g.alpha = state.alpha[g.id];

        RecommendationProfile prof = run_strategy(cfg.strategy, net, paths, per_commodity, cfg.solver);

        std::vector<DemandGroup> flat;
        for (const auto& v : per_commodity) flat.insert(flat.end(), v.begin(), v.end());
        Rng rng = Rng::stream(cfg.seed, "trust-response", static_cast<uint64_t>(it));
        StrategyOutcome outcome = simulate_response(net, paths, prof, flat, cfg.mode, rng);
        state.congestion.push_back(outcome.congestion);

        for (const auto& g : flat) {
            if (g.amount <= 0) continue;
            size_t pb = selfish_path(g, idx);
            double prior_best = path_latency(net, idx.paths[pb], outcome.realized_flow.edge_flows);
            double b = regret(outcome.chosen_latency.at(g.id), prior_best);
            double before = state.alpha[g.id];
            double after = update_trust(before, b, cfg.epsilon);
            state.alpha[g.id] = after;
            state.history.push_back({it, g.id, before, after, b,
                                     outcome.accepted.count(g.id) ? outcome.accepted.at(g.id) : 0.0});
        }
    }
    return state;
}

}  // namespace tasr
