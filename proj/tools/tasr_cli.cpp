#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tasr/harness.hpp"

namespace {

using namespace tasr;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
    std::string network, trips, config;
    std::string strategy;
    double delta = -1;
    int seeds = -1;
    long long base_seed = -1;
    int interactions = -1;
    double epsilon = -1;
    std::string response;
    int k_paths = -1;
    std::string out_dir;
    std::string prior;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--network", o.network, "TNTP link file");
    cmd->add_option("--trips", o.trips, "TNTP trips file");
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--strategy", o.strategy, "strategy name (tasr,llf,scale,ascale,aloof,cc)");
    cmd->add_option("--delta", o.delta, "demand per network edge");
    cmd->add_option("--seeds", o.seeds, "number of seeds");
    cmd->add_option("--base-seed", o.base_seed, "base RNG seed");
    cmd->add_option("--interactions", o.interactions, "repeated interactions (1 = single shot)");
    cmd->add_option("--epsilon", o.epsilon, "trust step size");
    cmd->add_option("--response", o.response, "bernoulli|expected");
    cmd->add_option("--k-paths", o.k_paths, "paths enumerated per commodity");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--prior", o.prior, "free-flow|ue");
}

ExperimentConfig build_config(const CommonOpts& o) {
    ExperimentConfig cfg;
    cfg.trust_classes = ExperimentConfig::default_trust_classes();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("cannot open config " + o.config);
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = parse_config_json(ss.str());
    }
    // CLI flags shadow config keys
    if (!o.network.empty()) cfg.network_path = o.network;
    if (!o.trips.empty()) cfg.trips_path = o.trips;
    if (!o.strategy.empty()) cfg.strategies = {o.strategy};
    if (o.delta > 0) cfg.delta = o.delta;
    if (o.seeds > 0) cfg.seeds = o.seeds;
    if (o.base_seed >= 0) cfg.base_seed = static_cast<uint64_t>(o.base_seed);
    if (o.interactions > 0) cfg.interactions = o.interactions;
    if (o.epsilon > 0) cfg.epsilon = o.epsilon;
    if (!o.response.empty()) {
        if (o.response == "bernoulli")
            cfg.response_mode = ResponseMode::bernoulli;
        else if (o.response == "expected")
            cfg.response_mode = ResponseMode::expected;
        else
            throw ConfigError("response must be bernoulli or expected");
    }
    if (o.k_paths > 0) cfg.k_paths = o.k_paths;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.prior.empty()) cfg.prior = o.prior;
    return cfg;
}

int do_solve(const CommonOpts& o, bool system_optimum) {
    ExperimentConfig cfg = build_config(o);
    if (cfg.commodities.empty() && cfg.trips_path.empty()) throw ConfigError("need --trips or commodities");
    Instance inst = load_instance(cfg);
    std::vector<Commodity> demands = inst.commodities;
    double r = cfg.delta * static_cast<double>(inst.net.edges.size());
    for (auto& d : demands) d.demand = r / static_cast<double>(demands.size());
    AssignmentResult res = system_optimum ? solve_cc(inst.net, inst.paths, demands, cfg.solver)
                                          : solve_ue(inst.net, inst.paths, demands, cfg.solver);
    std::cout << (system_optimum ? "cc" : "ue") << " objective " << res.objective << " gap " << res.relative_gap
              << " iterations " << res.iterations << " converged " << (res.converged ? "yes" : "no") << "\n";
    PathIndex idx = PathIndex::build(inst.paths);
    for (size_t c = 0; c < inst.commodities.size(); ++c) {
        size_t off = idx.commodity_offset[c], cnt = idx.commodity_count[c];
        for (size_t p = off; p < off + cnt; ++p) {
            if (res.flows.path_flows[p] <= 1e-9) continue;
            std::cout << "commodity " << c << " path " << (p - off) << " flow " << res.flows.path_flows[p]
                      << " latency " << path_latency(inst.net, idx.paths[p], res.flows.edge_flows) << "\n";
        }
    }
    if (!res.converged) return kExitNumerical;
    return kExitOk;
}

int do_run(const CommonOpts& o) {
    ExperimentConfig cfg = build_config(o);
    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res = run_experiment(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    emit_csv(res.records, dir + "/results.csv");
    emit_summary_json(res, cfg, dir + "/summary.json");
    for (const auto& s : res.summary)
        std::cout << s.strategy << " mean_per_unit " << s.mean_per_unit << " sd " << s.sd_per_unit
                  << " mean_ratio " << s.mean_ratio << "\n";
    std::cout << "wall time " << wall << " s\n";
    std::cout << "wrote " << dir << "/results.csv and summary.json\n";
    return kExitOk;
}

int do_trust_sim(const CommonOpts& o) {
    ExperimentConfig cfg = build_config(o);
    if (cfg.interactions < 2) cfg.interactions = 50;
    ExperimentResult res = run_experiment(cfg);
    std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
    emit_csv(res.records, dir + "/trust.csv");

    // long-format trajectory: one row per (seed, interaction, group)
    {
        std::ofstream out(dir + "/trust_long.csv", std::ios::binary);
        if (!out) throw DataError("cannot write " + dir + "/trust_long.csv");
        out << "seed,interaction,group_id,alpha_before,alpha_after,regret,accepted\n";
        char buf[160];
        for (const auto& rec : res.records) {
            if (rec.strategy == "cc") continue;
            for (const auto& g : rec.groups) {
                std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.6g,%.6g,%.6g,%.6g\n", rec.seed, rec.interaction,
                              g.group_id, g.alpha_before, g.alpha_after, g.regret, g.accepted);
                out << buf;
            }
        }
    }

    // mean trust per interaction across seeds and groups
    std::map<int, std::pair<double, int>> acc;
    for (const auto& rec : res.records)
        for (const auto& g : rec.groups) {
            acc[rec.interaction].first += g.alpha_after;
            acc[rec.interaction].second += 1;
        }
    for (const auto& [it, pr] : acc)
        std::cout << "interaction " << it << " mean_trust " << (pr.first / pr.second) << "\n";
    std::cout << "wrote " << dir << "/trust.csv and trust_long.csv\n";
    return kExitOk;
}

int do_oracle_check(const CommonOpts& o) {
    ExperimentConfig cfg = build_config(o);
    Instance inst = load_instance(cfg);
    auto per_commodity = generate_demands(cfg, inst, 0);
    std::vector<DemandGroup> flat;
    for (const auto& v : per_commodity) flat.insert(flat.end(), v.begin(), v.end());

    RecommendationProfile oracle = exact_best_response(inst.net, inst.paths, flat, cfg.solver);
    RecommendationProfile greedy = run_strategy("tasr", inst.net, inst.paths, per_commodity, cfg.solver);
    Rng rng = Rng::stream(cfg.base_seed, "oracle", 0);
    StrategyOutcome o1 = simulate_response(inst.net, inst.paths, oracle, flat, ResponseMode::expected, rng);
    StrategyOutcome o2 = simulate_response(inst.net, inst.paths, greedy, flat, ResponseMode::expected, rng);
    std::cout << "oracle expected congestion " << o1.congestion << "\n";
    std::cout << "tasr expected congestion " << o2.congestion << "\n";
    std::cout << "gap " << (o2.congestion - o1.congestion) / o1.congestion * 100.0 << "%\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trust-aware Stackelberg routing laboratory"};
    app.require_subcommand(1);

    CommonOpts o_cc, o_ue, o_run, o_trust, o_oracle;
    CLI::App* cmd_cc = app.add_subcommand("solve-cc", "system-optimal assignment");
    add_common(cmd_cc, o_cc);
    CLI::App* cmd_ue = app.add_subcommand("solve-ue", "user-equilibrium assignment");
    add_common(cmd_ue, o_ue);
    CLI::App* cmd_run = app.add_subcommand("run", "strategy sweep over seeds");
    add_common(cmd_run, o_run);
    CLI::App* cmd_trust = app.add_subcommand("trust-sim", "repeated-interaction trust dynamics");
    add_common(cmd_trust, o_trust);
    CLI::App* cmd_oracle = app.add_subcommand("oracle-check", "compare TASR to the exhaustive best response");
    add_common(cmd_oracle, o_oracle);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_cc->parsed()) return do_solve(o_cc, true);
        if (cmd_ue->parsed()) return do_solve(o_ue, false);
        if (cmd_run->parsed()) return do_run(o_run);
        if (cmd_trust->parsed()) return do_trust_sim(o_trust);
        if (cmd_oracle->parsed()) return do_oracle_check(o_oracle);
    } catch (const tasr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const tasr::ConvergenceError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const tasr::ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
