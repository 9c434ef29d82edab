#pragma once

#include "tasr/trust.hpp"

namespace tasr {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string network_path;
    std::string trips_path;                       // optional
    std::vector<std::pair<NodeId, NodeId>> commodities;  // empty + trips -> from-trips
    double delta = 5.0;                           // demand per network edge
    std::vector<std::pair<double, double>> trust_classes;  // (alpha, demand share)
    std::vector<std::string> strategies{"tasr", "llf", "scale", "ascale", "aloof"};
    int seeds = 1;
    uint64_t base_seed = 1;
    int interactions = 1;
    double epsilon = 0.25;
    ResponseMode response_mode = ResponseMode::bernoulli;
    int k_paths = 16;
    std::string prior = "free-flow";              // or "ue"
    SolverConfig solver;
    std::string out_dir;

    void validate() const;
    static std::vector<std::pair<double, double>> default_trust_classes();
};

struct GroupRecord {
    int group_id = 0;
    double alpha_before = 0;
    double alpha_after = 0;
    double accepted = 0;
    double regret = 0;
};

struct ResultRecord {
    std::string strategy;
    int seed = 0;
    int interaction = 1;
    double congestion = 0;
    double per_unit_tt = 0;
    double efficiency_ratio = 0;
    double runtime_s = 0;
    std::vector<GroupRecord> groups;
};

struct StrategySummary {
    std::string strategy;
    int n = 0;
    double mean_congestion = 0, sd_congestion = 0;
    double mean_per_unit = 0, sd_per_unit = 0;
    double mean_ratio = 0, sd_ratio = 0;
};

struct ExperimentResult {
    std::vector<ResultRecord> records;
    std::vector<StrategySummary> summary;
    double total_demand = 0;
};

/// Loaded instance shared across seeds.
struct Instance {
    Network net;
    std::vector<Commodity> commodities;  // demand fields unused (set per seed)
    PathSet paths;
};

Instance load_instance(const ExperimentConfig& cfg);

/// Seeded demand generation following the experiment protocol: total demand is
/// delta * |edges|, split over the trust classes; multi-commodity instances
/// assign each class to a commodity uniformly at random.
std::vector<std::vector<DemandGroup>> generate_demands(const ExperimentConfig& cfg, const Instance& inst,
                                                       uint64_t seed);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

ExperimentConfig parse_config_json(const std::string& text);

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path);
void emit_summary_json(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& path);

std::string csv_to_string(const std::vector<ResultRecord>& records);
std::string summary_to_string(const ExperimentResult& result, const ExperimentConfig& cfg);

}  // namespace tasr
