#include "tasr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace tasr {

using nlohmann::json;

std::vector<std::pair<double, double>> ExperimentConfig::default_trust_classes() {
    // one sixth fully noncompliant, one sixth fully compliant,
    // the remaining two thirds split equally over the partial classes
    return {{0.0, 1.0 / 6.0}, {0.25, 2.0 / 9.0}, {0.5, 2.0 / 9.0}, {0.75, 2.0 / 9.0}, {1.0, 1.0 / 6.0}};
}

void ExperimentConfig::validate() const {
    if (network_path.empty()) throw ConfigError("network path is required");
    if (delta <= 0) throw ConfigError("delta must be positive");
    if (seeds < 1) throw ConfigError("seeds must be >= 1");
    if (interactions < 1) throw ConfigError("interactions must be >= 1");
    if (k_paths < 1) throw ConfigError("k_paths must be >= 1");
    if (epsilon <= 0 || epsilon > 1) throw ConfigError("epsilon must be in (0,1]");
    if (prior != "free-flow" && prior != "ue") throw ConfigError("prior must be 'free-flow' or 'ue'");
    if (!trust_classes.empty()) {
        double share = 0;
        for (const auto& [a, s] : trust_classes) {
            if (a < 0 || a > 1) throw ConfigError("trust alpha outside [0,1]");
            if (s < 0) throw ConfigError("negative demand share");
            share += s;
        }
        if (std::abs(share - 1.0) > 1e-9) throw ConfigError("demand shares must sum to 1");
    }
    for (const auto& s : strategies)
        if (s != "tasr" && s != "llf" && s != "scale" && s != "ascale" && s != "aloof" && s != "cc")
            throw ConfigError("unknown strategy '" + s + "'");
}

Instance load_instance(const ExperimentConfig& cfg) {
    Instance inst;
    inst.net = load_network_file(cfg.network_path);
    if (!cfg.commodities.empty()) {
        for (auto [s, d] : cfg.commodities) inst.commodities.push_back({s, d, 0.0});
    } else if (!cfg.trips_path.empty()) {
        auto trips = load_trips_file(cfg.trips_path);
        for (const auto& t : trips) {
            if (!inst.net.has_node(t.source) || !inst.net.has_node(t.destination))
                throw DataError("trip references node absent from network: " + std::to_string(t.source) + "->" +
                                std::to_string(t.destination));
            inst.commodities.push_back({t.source, t.destination, 0.0});
        }
    } else {
        throw ConfigError("either commodities or a trips file must be given");
    }
    inst.paths = build_path_set(inst.net, inst.commodities, cfg.k_paths);
    return inst;
}

namespace {

std::vector<std::vector<double>> build_priors(const ExperimentConfig& cfg, const Instance& inst,
                                              double total_demand) {
    PathIndex idx = PathIndex::build(inst.paths);
    std::vector<std::vector<double>> priors(inst.commodities.size());
    std::vector<double> edge_flows(inst.net.edges.size(), 0.0);
    if (cfg.prior == "ue" && total_demand > 0) {
        std::vector<Commodity> demands = inst.commodities;
        for (auto& d : demands) d.demand = total_demand / static_cast<double>(demands.size());
        AssignmentResult ue = solve_ue(inst.net, inst.paths, demands, cfg.solver);
        edge_flows = ue.flows.edge_flows;
    }
    for (size_t c = 0; c < inst.commodities.size(); ++c) {
        size_t off = idx.commodity_offset[c], cnt = idx.commodity_count[c];
        priors[c].resize(cnt);
        for (size_t i = 0; i < cnt; ++i) priors[c][i] = path_latency(inst.net, idx.paths[off + i], edge_flows);
    }
    return priors;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::vector<std::vector<DemandGroup>> generate_demands(const ExperimentConfig& cfg, const Instance& inst,
                                                       uint64_t seed) {
    auto classes = cfg.trust_classes.empty() ? ExperimentConfig::default_trust_classes() : cfg.trust_classes;
    double r = cfg.delta * static_cast<double>(inst.net.edges.size());
    auto priors = build_priors(cfg, inst, r);

    std::vector<std::vector<DemandGroup>> out(inst.commodities.size());
    Rng rng = Rng::stream(cfg.base_seed, "demand", seed);
    int next_id = 0;
    for (size_t k = 0; k < classes.size(); ++k) {
        auto [alpha, share] = classes[k];
        double amount = share * r;
        if (amount <= 0) continue;
        size_t c = inst.commodities.size() == 1 ? 0 : static_cast<size_t>(rng.next_below(inst.commodities.size()));
        DemandGroup g;
        g.id = next_id++;
        g.amount = amount;
        g.alpha = alpha;
        g.commodity = static_cast<int>(c);
        g.prior = priors[c];
        out[c].push_back(g);
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Instance inst = load_instance(cfg);
    double r = cfg.delta * static_cast<double>(inst.net.edges.size());

    ExperimentResult res;
    res.total_demand = r;
    PathIndex idx = PathIndex::build(inst.paths);

    for (int seed = 0; seed < cfg.seeds; ++seed) {
        auto per_commodity = generate_demands(cfg, inst, static_cast<uint64_t>(seed));
        std::vector<DemandGroup> flat;
        for (const auto& v : per_commodity) flat.insert(flat.end(), v.begin(), v.end());

        std::vector<Commodity> demands = inst.commodities;
        for (auto& d : demands) d.demand = 0;
        for (const auto& g : flat) demands[static_cast<size_t>(g.commodity)].demand += g.amount;

        AssignmentResult cc = solve_cc(inst.net, inst.paths, demands, cfg.solver);
        if (!cc.converged) throw ConvergenceError("CC assignment did not converge");

        ResultRecord cc_row;
        cc_row.strategy = "cc";
        cc_row.seed = seed;
        cc_row.congestion = cc.objective;
        cc_row.per_unit_tt = cc.objective / r;
        cc_row.efficiency_ratio = 1.0;
        res.records.push_back(cc_row);

        for (const auto& strat : cfg.strategies) {
            if (strat == "cc") continue;
            if (cfg.interactions == 1) {
                RecommendationProfile prof = run_strategy(strat, inst.net, inst.paths, per_commodity, cfg.solver);
                Rng rng = Rng::stream(cfg.base_seed, "response:" + strat, static_cast<uint64_t>(seed));
                StrategyOutcome outcome =
                    simulate_response(inst.net, inst.paths, prof, flat, cfg.response_mode, rng);

                ResultRecord row;
                row.strategy = strat;
                row.seed = seed;
                row.congestion = outcome.congestion;
                row.per_unit_tt = outcome.congestion / r;
                row.efficiency_ratio = efficiency_ratio(outcome, cc.objective);
                for (const auto& g : flat) {
                    size_t pb = selfish_path(g, idx);
                    double prior_best = path_latency(inst.net, idx.paths[pb], outcome.realized_flow.edge_flows);
                    double b = regret(outcome.chosen_latency.at(g.id), prior_best);
                    GroupRecord gr;
                    gr.group_id = g.id;
                    gr.alpha_before = g.alpha;
                    gr.alpha_after = update_trust(g.alpha, b, cfg.epsilon);
                    gr.accepted = outcome.accepted.count(g.id) ? outcome.accepted.at(g.id) : 0.0;
                    gr.regret = b;
                    row.groups.push_back(gr);
                }
                res.records.push_back(row);
            } else {
                TrustSimConfig tcfg;
                tcfg.strategy = strat;
                tcfg.interactions = cfg.interactions;
                tcfg.epsilon = cfg.epsilon;
                tcfg.mode = cfg.response_mode;
                tcfg.seed = Rng::stream(cfg.base_seed, "trust:" + strat, static_cast<uint64_t>(seed)).state;
                tcfg.solver = cfg.solver;
                TrustState ts = repeated_interaction(inst.net, inst.paths, per_commodity, tcfg);

                std::map<int, std::vector<TrustRecord>> by_it;
                for (const auto& h : ts.history) by_it[h.interaction].push_back(h);
                for (const auto& [it, recs] : by_it) {
                    ResultRecord row;
                    row.strategy = strat;
                    row.seed = seed;
                    row.interaction = it;
                    row.congestion = ts.congestion.at(static_cast<size_t>(it - 1));
                    row.per_unit_tt = row.congestion / r;
                    row.efficiency_ratio = row.congestion / cc.objective;
                    for (const auto& h : recs)
                        row.groups.push_back({h.group_id, h.alpha_before, h.alpha_after, h.accepted, h.regret});
                    res.records.push_back(row);
                }
            }
        }
    }

    // aggregate in deterministic (strategy) order
    std::vector<std::string> order{"cc"};
    for (const auto& s : cfg.strategies)
        if (s != "cc") order.push_back(s);
    for (const auto& strat : order) {
        std::vector<double> cong, pu, ratio;
        for (const auto& rec : res.records) {
            if (rec.strategy != strat || rec.interaction != 1) continue;
            cong.push_back(rec.congestion);
            pu.push_back(rec.per_unit_tt);
            ratio.push_back(rec.efficiency_ratio);
        }
        if (cong.empty()) continue;
        auto mean = [](const std::vector<double>& v) {
            return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        };
        auto sd = [&](const std::vector<double>& v, double m) {
            if (v.size() < 2) return 0.0;
            double acc = 0;
            for (double x : v) acc += (x - m) * (x - m);
            return std::sqrt(acc / static_cast<double>(v.size() - 1));
        };
        StrategySummary s;
        s.strategy = strat;
        s.n = static_cast<int>(cong.size());
        s.mean_congestion = mean(cong);
        s.sd_congestion = sd(cong, s.mean_congestion);
        s.mean_per_unit = mean(pu);
        s.sd_per_unit = sd(pu, s.mean_per_unit);
        s.mean_ratio = mean(ratio);
        s.sd_ratio = sd(ratio, s.mean_ratio);
        res.summary.push_back(s);
    }
    return res;
}

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.trust_classes = ExperimentConfig::default_trust_classes();
    try {
        if (j.contains("network")) cfg.network_path = j["network"].get<std::string>();
        if (j.contains("trips")) cfg.trips_path = j["trips"].get<std::string>();
        if (j.contains("commodities"))
            for (const auto& c : j["commodities"])
                cfg.commodities.emplace_back(c.at(0).get<int>(), c.at(1).get<int>());
        if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
        if (j.contains("trust_classes")) {
            cfg.trust_classes.clear();
            for (const auto& t : j["trust_classes"])
                cfg.trust_classes.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
        }
        if (j.contains("strategies")) cfg.strategies = j["strategies"].get<std::vector<std::string>>();
        if (j.contains("seeds")) cfg.seeds = j["seeds"].get<int>();
        if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<uint64_t>();
        if (j.contains("interactions")) cfg.interactions = j["interactions"].get<int>();
        if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
        if (j.contains("response")) {
            std::string m = j["response"].get<std::string>();
            if (m == "bernoulli")
                cfg.response_mode = ResponseMode::bernoulli;
            else if (m == "expected")
                cfg.response_mode = ResponseMode::expected;
            else
                throw ConfigError("response must be 'bernoulli' or 'expected'");
        }
        if (j.contains("k_paths")) cfg.k_paths = j["k_paths"].get<int>();
        if (j.contains("prior")) cfg.prior = j["prior"].get<std::string>();
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            if (s.contains("max_iterations")) cfg.solver.max_iterations = s["max_iterations"].get<int>();
            if (s.contains("relative_gap_target"))
                cfg.solver.relative_gap_target = s["relative_gap_target"].get<double>();
            if (s.contains("line_search_tolerance"))
                cfg.solver.line_search_tolerance = s["line_search_tolerance"].get<double>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    return cfg;
}

std::string csv_to_string(const std::vector<ResultRecord>& records) {
    if (records.empty()) throw DataError("no records to emit");
    size_t max_groups = 0;
    for (const auto& r : records) max_groups = std::max(max_groups, r.groups.size());

    std::ostringstream os;
    os << "strategy,seed,interaction,congestion,per_unit_tt,efficiency_ratio,runtime_s";
    for (size_t g = 0; g < max_groups; ++g)
        os << ",group_id," << "alpha_before,alpha_after,accepted,regret";
    os << "\n";
    for (const auto& r : records) {
        os << r.strategy << "," << r.seed << "," << r.interaction << "," << fmt6(r.congestion) << ","
           << fmt6(r.per_unit_tt) << "," << fmt6(r.efficiency_ratio) << "," << fmt6(r.runtime_s);
        for (size_t g = 0; g < max_groups; ++g) {
            if (g < r.groups.size()) {
                const auto& gr = r.groups[g];
                os << "," << gr.group_id << "," << fmt6(gr.alpha_before) << "," << fmt6(gr.alpha_after) << ","
                   << fmt6(gr.accepted) << "," << fmt6(gr.regret);
            } else {
                os << ",,,,,";
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string summary_to_string(const ExperimentResult& result, const ExperimentConfig& cfg) {
    if (result.summary.empty()) throw DataError("empty aggregate");
    json j;
    j["total_demand"] = result.total_demand;
    j["metadata"] = {{"delta", cfg.delta},
                     {"seeds", cfg.seeds},
                     {"base_seed", cfg.base_seed},
                     {"k_paths", cfg.k_paths},
                     {"prior", cfg.prior},
                     {"response", cfg.response_mode == ResponseMode::bernoulli ? "bernoulli" : "expected"},
                     {"partial_class_rule", "remaining 2/3 of demand split equally over partial classes"},
                     {"multi_commodity_partition", "each trust class assigned to one uniform random commodity"},
                     {"solver",
                      {{"max_iterations", cfg.solver.max_iterations},
                       {"relative_gap_target", cfg.solver.relative_gap_target},
                       {"line_search_tolerance", cfg.solver.line_search_tolerance}}}};
    j["strategies"] = json::array();
    for (const auto& s : result.summary) {
        j["strategies"].push_back({{"strategy", s.strategy},
                                   {"n", s.n},
                                   {"mean_congestion", std::stod(fmt6(s.mean_congestion))},
                                   {"sd_congestion", std::stod(fmt6(s.sd_congestion))},
                                   {"mean_per_unit_tt", std::stod(fmt6(s.mean_per_unit))},
                                   {"sd_per_unit_tt", std::stod(fmt6(s.sd_per_unit))},
                                   {"mean_efficiency_ratio", std::stod(fmt6(s.mean_ratio))},
                                   {"sd_efficiency_ratio", std::stod(fmt6(s.sd_ratio))}});
    }
    return j.dump(2) + "\n";
}

void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << csv_to_string(records);
}

void emit_summary_json(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << summary_to_string(result, cfg);
}

}  // namespace tasr
