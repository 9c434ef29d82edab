#include "tasr/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace tasr {

namespace {

constexpr double kFlowTol = 1e-9;

struct CommoditySlice {
    size_t offset = 0;
    size_t count = 0;
};

CommoditySlice slice_of(const PathIndex& idx, int commodity) {
    CommoditySlice s;
    s.offset = idx.commodity_offset.at(static_cast<size_t>(commodity));
    s.count = idx.commodity_count.at(static_cast<size_t>(commodity));
    return s;
}

// paths of one commodity ordered by realized latency at the given edge flows
std::vector<size_t> latency_order(const Network& net, const PathIndex& idx, const CommoditySlice& s,
                                  const std::vector<double>& edge_flows, bool descending) {
    std::vector<size_t> order(s.count);
    std::iota(order.begin(), order.end(), s.offset);
    std::vector<double> lat(s.count);
    for (size_t i = 0; i < s.count; ++i) lat[i] = path_latency(net, idx.paths[s.offset + i], edge_flows);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        double la = lat[a - s.offset], lb = lat[b - s.offset];
        if (std::abs(la - lb) > 1e-12) return descending ? la > lb : la < lb;
        return descending ? a > b : a < b;  // ties: larger index first when descending
    });
    return order;
}

std::vector<Commodity> commodity_demands(const PathIndex& idx, size_t n_commodities,
                                         const std::vector<double>& totals) {
    (void)idx;
    std::vector<Commodity> out(n_commodities);
    for (size_t i = 0; i < n_commodities; ++i) out[i].demand = totals[i];
    return out;
}

}  // namespace

size_t selfish_path(const DemandGroup& g, const PathIndex& idx) {
    CommoditySlice s = slice_of(idx, g.commodity);
    if (g.prior.size() != s.count) throw StrategyError("prior not defined on every commodity path");
    size_t best = 0;
    for (size_t i = 1; i < s.count; ++i)
        if (g.prior[i] < g.prior[best] - 1e-12) best = i;
    return s.offset + best;
}

double noncompliant_fraction(const std::vector<DemandGroup>& groups) {
    double nc = 0, total = 0;
    for (const auto& g : groups) {
        total += g.amount;
        if (g.alpha == 0) nc += g.amount;
    }
    return total > 0 ? nc / total : 0.0;
}

namespace {

struct Placement {
    RecommendationProfile profile;
    std::vector<double> planned;  // per path
};

// Greedy fill of one group over the support paths in the given order.
// Returns per-(part) recommendations; planned and controllable are updated with
// the expected split: alpha*take on the offered path, (1-alpha)*take predicted selfish.
void offer_group(const DemandGroup& g, const std::vector<size_t>& order, const std::vector<double>& opt,
                 size_t selfish, std::vector<double>& planned, std::vector<double>& controllable,
                 std::vector<Recommendation>& recs, int& part_counter) {
    double remaining = g.amount;
    std::set<size_t> offered;
    while (remaining > kFlowTol) {
        size_t chosen = SIZE_MAX;
        for (size_t p : order) {
            if (offered.count(p)) continue;
            if (opt[p] > kFlowTol && planned[p] < opt[p] - kFlowTol) {
                chosen = p;
                break;
            }
        }
        double take;
        if (chosen == SIZE_MAX) {
            // every optimal path saturated up to tolerance; park the remainder
            // on the last support path to keep the assignment feasible
            for (auto it = order.rbegin(); it != order.rend(); ++it)
                if (opt[*it] > kFlowTol) {
                    chosen = *it;
                    break;
                }
            if (chosen == SIZE_MAX) chosen = order.back();
            take = remaining;
        } else {
            take = std::min(remaining, opt[chosen] - planned[chosen]);
        }
        recs.push_back({g.id, part_counter++, take, chosen});
        planned[chosen] += g.alpha * take;
        controllable[chosen] += g.alpha * take;
        planned[selfish] += (1.0 - g.alpha) * take;
        remaining -= take;
        offered.insert(chosen);
    }
}

}  // namespace

RecommendationProfile tasr_single(const Network& net, const PathSet& paths, std::vector<DemandGroup> groups,
                                  const SolverConfig& cfg, const std::vector<double>* background) {
    PathIndex idx = PathIndex::build(paths);
    if (groups.empty()) throw StrategyError("no demand groups");
    int commodity = groups.front().commodity;
    for (const auto& g : groups)
        if (g.commodity != commodity) throw StrategyError("tasr_single requires a single commodity");
    CommoditySlice s = slice_of(idx, commodity);

    double total = 0;
    for (const auto& g : groups) total += g.amount;

    std::vector<double> totals(idx.commodity_count.size(), 0.0);
    totals[static_cast<size_t>(commodity)] = total;
    AssignmentResult cc = solve_cc(net, paths, commodity_demands(idx, totals.size(), totals), cfg, background);

    // evaluate latencies at the anticipated optimal loading
    std::vector<double> loaded = cc.flows.edge_flows;
    if (background)
        for (size_t e = 0; e < loaded.size(); ++e) loaded[e] += (*background)[e];
    std::vector<size_t> order = latency_order(net, idx, s, loaded, /*descending=*/false);

    // ignore solver dust so saturation arithmetic stays meaningful
    std::vector<double> opt(idx.size(), 0.0);
    for (size_t p = s.offset; p < s.offset + s.count; ++p)
        opt[p] = cc.flows.path_flows[p] > 1e-6 * std::max(1.0, total) ? cc.flows.path_flows[p] : 0.0;

    std::sort(groups.begin(), groups.end(), [](const DemandGroup& a, const DemandGroup& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        return a.id < b.id;
    });

    RecommendationProfile prof;
    prof.opt_flow = cc.flows;
    prof.cc_objective = cc.objective;
    std::vector<double> planned(idx.size(), 0.0);
    prof.controllable.assign(idx.size(), 0.0);

    // noncompliant demand is predicted on its selfish paths first
    for (const auto& g : groups) {
        if (g.alpha == 0 && g.amount > 0) planned[selfish_path(g, idx)] += g.amount;
    }
    int part_counter = 0;
    for (const auto& g : groups) {
        if (g.alpha <= 0 || g.amount <= 0) continue;
        offer_group(g, order, opt, selfish_path(g, idx), planned, prof.controllable, prof.recommendations,
                    part_counter);
    }

    double placed = std::accumulate(planned.begin(), planned.end(), 0.0);
    if (std::abs(placed - total) > 1e-6 * std::max(1.0, total))
        throw StrategyError("planned flow does not conserve demand");
    prof.planned_flow = make_flow(net, idx, planned);
    return prof;
}

RecommendationProfile tasr_multi(const Network& net, const PathSet& paths,
                                 const std::vector<std::vector<DemandGroup>>& per_commodity,
                                 const SolverConfig& cfg) {
    if (per_commodity.empty()) throw StrategyError("no commodities");
    PathIndex idx = PathIndex::build(paths);

    std::vector<size_t> order(per_commodity.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> nc_frac(per_commodity.size()), totals(per_commodity.size());
    for (size_t i = 0; i < per_commodity.size(); ++i) {
        nc_frac[i] = noncompliant_fraction(per_commodity[i]);
        totals[i] = 0;
        for (const auto& g : per_commodity[i]) totals[i] += g.amount;
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (std::abs(nc_frac[a] - nc_frac[b]) > 1e-12) return nc_frac[a] > nc_frac[b];
        if (std::abs(totals[a] - totals[b]) > 1e-12) return totals[a] > totals[b];
        return a < b;
    });

    RecommendationProfile out;
    out.controllable.assign(idx.size(), 0.0);
    std::vector<double> planned(idx.size(), 0.0), opt(idx.size(), 0.0);
    std::vector<double> background(net.edges.size(), 0.0);
    double cc_total = 0;

    for (size_t c : order) {
        if (per_commodity[c].empty() || totals[c] <= 0) continue;
        RecommendationProfile p = tasr_single(net, paths, per_commodity[c], cfg, &background);
        for (auto& r : p.recommendations) out.recommendations.push_back(r);
        for (size_t i = 0; i < idx.size(); ++i) {
            planned[i] += p.planned_flow.path_flows[i];
            opt[i] += p.opt_flow.path_flows[i];
            out.controllable[i] += p.controllable[i];
        }
        cc_total += p.cc_objective;
        // planned demand of this commodity becomes existing demand for the rest
        for (size_t e = 0; e < background.size(); ++e) background[e] += p.planned_flow.edge_flows[e];
    }
    out.planned_flow = make_flow(net, idx, planned);
    out.opt_flow = make_flow(net, idx, opt);
    out.cc_objective = cc_total;
    return out;
}

namespace {

enum class BaselineKind { llf, scale, ascale, aloof };

RecommendationProfile baseline(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                               const SolverConfig& cfg, BaselineKind kind) {
    PathIndex idx = PathIndex::build(paths);
    size_t n_comm = idx.commodity_count.size();

    std::vector<double> totals(n_comm, 0.0), compliant(n_comm, 0.0);
    double total_all = 0, compliant_all = 0;
    for (const auto& g : groups) {
        totals[static_cast<size_t>(g.commodity)] += g.amount;
        total_all += g.amount;
        if (g.alpha >= 0.5) {
            compliant[static_cast<size_t>(g.commodity)] += g.amount;
            compliant_all += g.amount;
        }
    }
    double mu = total_all > 0 ? compliant_all / total_all : 0.0;

    AssignmentResult cc = solve_cc(net, paths, commodity_demands(idx, n_comm, totals), cfg);

    RecommendationProfile prof;
    prof.opt_flow = cc.flows;
    prof.cc_objective = cc.objective;
    prof.controllable.assign(idx.size(), 0.0);
    std::vector<double> planned(idx.size(), 0.0);

    // strategy-specific auxiliary optimum
    std::vector<double> aux(idx.size(), 0.0);
    if (kind == BaselineKind::ascale) {
        double rho = 1.0 + std::sqrt(1.0 - mu);
        std::vector<double> scaled(n_comm);
        for (size_t i = 0; i < n_comm; ++i) scaled[i] = std::round(rho * totals[i]);
        AssignmentResult r = solve_cc(net, paths, commodity_demands(idx, n_comm, scaled), cfg);
        for (size_t p = 0; p < idx.size(); ++p) aux[p] = (mu / rho) * r.flows.path_flows[p];
    } else if (kind == BaselineKind::aloof) {
        std::vector<double> scaled(n_comm);
        for (size_t i = 0; i < n_comm; ++i) scaled[i] = mu * totals[i];
        if (mu > 0) {
            AssignmentResult r = solve_cc(net, paths, commodity_demands(idx, n_comm, scaled), cfg);
            aux = r.flows.path_flows;
        }
    }

    // per-commodity recommendation targets for the compliant mass
    std::vector<double> targets(idx.size(), 0.0);
    for (size_t c = 0; c < n_comm; ++c) {
        if (compliant[c] <= 0) continue;
        CommoditySlice s = slice_of(idx, static_cast<int>(c));
        double mass = compliant[c];
        switch (kind) {
            case BaselineKind::llf: {
                auto order = latency_order(net, idx, s, cc.flows.edge_flows, /*descending=*/true);
                double remaining = mass;
                for (size_t p : order) {
                    if (remaining <= kFlowTol) break;
                    double take = std::min(remaining, cc.flows.path_flows[p]);
                    targets[p] += take;
                    remaining -= take;
                }
                if (remaining > kFlowTol) targets[order.back()] += remaining;  // fp dust
                break;
            }
            case BaselineKind::scale: {
                double ratio = totals[c] > 0 ? mass / totals[c] : 0.0;
                for (size_t p = s.offset; p < s.offset + s.count; ++p)
                    targets[p] = ratio * cc.flows.path_flows[p];
                break;
            }
            case BaselineKind::ascale: {
                double raw_sum = 0;
                for (size_t p = s.offset; p < s.offset + s.count; ++p) raw_sum += aux[p];
                auto order = latency_order(net, idx, s, cc.flows.edge_flows, /*descending=*/false);
                double spill = 0;
                if (raw_sum > 0) {
                    double norm = mass / raw_sum;
                    for (size_t p = s.offset; p < s.offset + s.count; ++p) {
                        double want = aux[p] * norm;
                        double capped = std::min(want, cc.flows.path_flows[p]);  // stay opt-restricted
                        targets[p] = capped;
                        spill += want - capped;
                    }
                } else {
                    spill = mass;
                }
                for (size_t p : order) {
                    if (spill <= kFlowTol) break;
                    double room = cc.flows.path_flows[p] - targets[p];
                    double take = std::min(spill, std::max(0.0, room));
                    targets[p] += take;
                    spill -= take;
                }
                break;
            }
            case BaselineKind::aloof: {
                double raw_sum = 0;
                for (size_t p = s.offset; p < s.offset + s.count; ++p) raw_sum += aux[p];
                if (raw_sum > 0)
                    for (size_t p = s.offset; p < s.offset + s.count; ++p)
                        targets[p] = aux[p] * mass / raw_sum;
                break;
            }
        }
    }

    // noncompliant demand is predicted selfish everywhere
    for (const auto& g : groups) {
        if (g.amount <= 0 || g.alpha >= 0.5) continue;
        planned[selfish_path(g, idx)] += g.amount;
    }

    if (kind == BaselineKind::llf) {
        // sequential fill: whole compliant groups onto the largest-latency
        // optimal paths, most trusting first, splitting only at path boundaries
        std::vector<const DemandGroup*> compliants;
        for (const auto& g : groups)
            if (g.amount > 0 && g.alpha >= 0.5) compliants.push_back(&g);
        std::stable_sort(compliants.begin(), compliants.end(), [](const DemandGroup* a, const DemandGroup* b) {
            if (a->alpha != b->alpha) return a->alpha > b->alpha;
            return a->id < b->id;
        });
        std::vector<double> room = targets;
        for (const auto* g : compliants) {
            CommoditySlice s = slice_of(idx, g->commodity);
            size_t selfish = selfish_path(*g, idx);
            auto order = latency_order(net, idx, s, cc.flows.edge_flows, /*descending=*/true);
            double remaining = g->amount;
            int part = 0;
            for (size_t p : order) {
                if (remaining <= kFlowTol) break;
                double take = std::min(remaining, room[p]);
                if (take <= kFlowTol) continue;
                prof.recommendations.push_back({g->id, part++, take, p});
                planned[p] += g->alpha * take;
                prof.controllable[p] += g->alpha * take;
                planned[selfish] += (1.0 - g->alpha) * take;
                room[p] -= take;
                remaining -= take;
            }
            if (remaining > kFlowTol) planned[selfish] += remaining;  // fp dust
        }
    } else {
        // each compliant group receives an equal share of its commodity's targets
        for (const auto& g : groups) {
            if (g.amount <= 0 || g.alpha < 0.5) continue;
            size_t selfish = selfish_path(g, idx);
            CommoditySlice s = slice_of(idx, g.commodity);
            double mass = compliant[static_cast<size_t>(g.commodity)];
            double share = mass > 0 ? g.amount / mass : 0.0;
            int part = 0;
            double covered = 0;
            for (size_t p = s.offset; p < s.offset + s.count; ++p) {
                double amt = targets[p] * share;
                if (amt <= kFlowTol) continue;
                prof.recommendations.push_back({g.id, part++, amt, p});
                planned[p] += g.alpha * amt;
                prof.controllable[p] += g.alpha * amt;
                planned[selfish] += (1.0 - g.alpha) * amt;
                covered += amt;
            }
            if (covered < g.amount - 1e-6 * std::max(1.0, g.amount))
                planned[selfish] += g.amount - covered;  // targets may not cover everything (aloof mu<1)
        }
    }

    prof.planned_flow = make_flow(net, idx, planned);
    return prof;
}

}  // namespace

RecommendationProfile llf(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                          const SolverConfig& cfg) {
    return baseline(net, paths, groups, cfg, BaselineKind::llf);
}
RecommendationProfile scale(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                            const SolverConfig& cfg) {
    return baseline(net, paths, groups, cfg, BaselineKind::scale);
}
RecommendationProfile ascale(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                             const SolverConfig& cfg) {
    return baseline(net, paths, groups, cfg, BaselineKind::ascale);
}
RecommendationProfile aloof(const Network& net, const PathSet& paths, const std::vector<DemandGroup>& groups,
                            const SolverConfig& cfg) {
    return baseline(net, paths, groups, cfg, BaselineKind::aloof);
}

RecommendationProfile run_strategy(const std::string& name, const Network& net, const PathSet& paths,
                                   const std::vector<std::vector<DemandGroup>>& per_commodity,
                                   const SolverConfig& cfg) {
    if (name == "tasr") return tasr_multi(net, paths, per_commodity, cfg);
    std::vector<DemandGroup> flat;
    for (const auto& v : per_commodity) flat.insert(flat.end(), v.begin(), v.end());
    if (name == "llf") return llf(net, paths, flat, cfg);
    if (name == "scale") return scale(net, paths, flat, cfg);
    if (name == "ascale") return ascale(net, paths, flat, cfg);
    if (name == "aloof") return aloof(net, paths, flat, cfg);
    throw StrategyError("unknown strategy '" + name + "'");
}

StrategyOutcome simulate_response(const Network& net, const PathSet& paths,
                                  const RecommendationProfile& profile, const std::vector<DemandGroup>& groups,
                                  ResponseMode mode, Rng rng) {
    PathIndex idx = PathIndex::build(paths);
    std::vector<double> realized(idx.size(), 0.0);

    std::map<int, const DemandGroup*> by_id;
    std::map<int, double> covered;
    for (const auto& g : groups) by_id[g.id] = &g;

    // (group, path) -> placed amount, for per-group statistics
    std::map<int, std::map<size_t, double>> placed;
    std::map<int, double> accepted_mass, recommended_mass;

    for (const auto& rec : profile.recommendations) {
        auto it = by_id.find(rec.group_id);
        if (it == by_id.end()) throw StrategyError("recommendation for unknown group");
        const DemandGroup& g = *it->second;
        covered[g.id] += rec.amount;
        recommended_mass[g.id] += rec.amount;
        size_t selfish = selfish_path(g, idx);
        if (mode == ResponseMode::expected) {
            realized[rec.path] += g.alpha * rec.amount;
            realized[selfish] += (1.0 - g.alpha) * rec.amount;
            placed[g.id][rec.path] += g.alpha * rec.amount;
            placed[g.id][selfish] += (1.0 - g.alpha) * rec.amount;
            accepted_mass[g.id] += g.alpha * rec.amount;
        } else {
            Rng draw = Rng::stream(rng.state, "accept", static_cast<uint64_t>(rec.group_id),
                                   static_cast<uint64_t>(rec.part));
            bool accept = draw.bernoulli(g.alpha);
            size_t dest = accept ? rec.path : selfish;
            realized[dest] += rec.amount;
            placed[g.id][dest] += rec.amount;
            if (accept) accepted_mass[g.id] += rec.amount;
        }
    }

    for (const auto& g : groups) {
        if (g.amount <= 0) continue;
        double rest = g.amount - covered[g.id];
        if (rest > 1e-9 * std::max(1.0, g.amount)) {
            if (g.alpha >= 1.0 && covered[g.id] <= 0)
                throw StrategyError("missing recommendation for fully compliant group " + std::to_string(g.id));
            size_t selfish = selfish_path(g, idx);
            realized[selfish] += rest;
            placed[g.id][selfish] += rest;
        }
    }

    StrategyOutcome out;
    out.realized_flow = make_flow(net, idx, realized);
    out.congestion = total_congestion(net, idx, out.realized_flow);

    for (const auto& g : groups) {
        if (g.amount <= 0) continue;
        const auto& mine = placed[g.id];
        size_t best_path = selfish_path(g, idx);
        double best_mass = -1, wsum = 0;
        for (const auto& [p, m] : mine) {
            double lat = path_latency(net, idx.paths[p], out.realized_flow.edge_flows);
            wsum += m * lat;
            if (m > best_mass) {
                best_mass = m;
                best_path = p;
            }
        }
        out.per_group_choice[g.id] = best_path;
        out.chosen_latency[g.id] = g.amount > 0 ? wsum / g.amount : 0.0;
        double rec_mass = recommended_mass.count(g.id) ? recommended_mass[g.id] : 0.0;
        out.accepted[g.id] = rec_mass > 0 ? accepted_mass[g.id] / rec_mass : 0.0;
    }
    return out;
}

RecommendationProfile exact_best_response(const Network& net, const PathSet& paths,
                                          const std::vector<DemandGroup>& groups, const SolverConfig& cfg) {
    (void)cfg;
    PathIndex idx = PathIndex::build(paths);

    std::vector<const DemandGroup*> active;  // groups whose recommendation matters
    for (const auto& g : groups)
        if (g.alpha > 0 && g.amount > 0) active.push_back(&g);
    std::sort(active.begin(), active.end(),
              [](const DemandGroup* a, const DemandGroup* b) { return a->id < b->id; });

    double profiles = 1;
    for (const auto* g : active) profiles *= static_cast<double>(slice_of(idx, g->commodity).count);
    if (profiles > 1e6) throw StrategyError("instance too large for exhaustive best response");

    std::vector<double> base(idx.size(), 0.0);
    for (const auto& g : groups)
        if ((g.alpha <= 0 || g.amount <= 0) && g.amount > 0) base[selfish_path(g, idx)] += g.amount;

    std::vector<size_t> choice(active.size(), 0);
    std::vector<size_t> best_choice;
    double best_cost = std::numeric_limits<double>::infinity();

    auto evaluate = [&]() {
        std::vector<double> f = base;
        for (size_t i = 0; i < active.size(); ++i) {
            const DemandGroup& g = *active[i];
            CommoditySlice s = slice_of(idx, g.commodity);
            size_t p = s.offset + choice[i];
            f[p] += g.alpha * g.amount;
            f[selfish_path(g, idx)] += (1.0 - g.alpha) * g.amount;
        }
        std::vector<double> ef(net.edges.size(), 0.0);
        for (size_t p = 0; p < idx.size(); ++p)
            for (EdgeId e : idx.paths[p].edges) ef[static_cast<size_t>(e)] += f[p];
        return total_congestion_edges(net, ef);
    };

    // lexicographic enumeration keeps the first minimizer lexicographically smallest
    bool done = active.empty();
    if (done) {
        best_cost = evaluate();
        best_choice = choice;
    }
    while (!done) {
        double c = evaluate();
        if (c < best_cost - 1e-15) {
            best_cost = c;
            best_choice = choice;
        }
        size_t d = active.size();
        while (d > 0) {
            --d;
            CommoditySlice s = slice_of(idx, active[d]->commodity);
            if (++choice[d] < s.count) break;
            choice[d] = 0;
            if (d == 0) done = true;
        }
        if (active.empty()) break;
    }

    RecommendationProfile prof;
    prof.controllable.assign(idx.size(), 0.0);
    std::vector<double> planned = base;
    for (size_t i = 0; i < active.size(); ++i) {
        const DemandGroup& g = *active[i];
        CommoditySlice s = slice_of(idx, g.commodity);
        size_t p = s.offset + best_choice[i];
        prof.recommendations.push_back({g.id, 0, g.amount, p});
        planned[p] += g.alpha * g.amount;
        prof.controllable[p] += g.alpha * g.amount;
        planned[selfish_path(g, idx)] += (1.0 - g.alpha) * g.amount;
    }
    prof.planned_flow = make_flow(net, idx, planned);
    prof.opt_flow = prof.planned_flow;
    prof.cc_objective = best_cost;
    return prof;
}

double efficiency_ratio(const StrategyOutcome& outcome, double cc_objective) {
    if (cc_objective <= 0) throw StrategyError("efficiency ratio needs a positive optimum");
    return outcome.congestion / cc_objective;
}

bool is_subflow(const FlowVector& f1, const FlowVector& f2, double tol) {
    if (f1.path_flows.size() != f2.path_flows.size()) throw DataError("subflow comparison over different path sets");
    for (size_t i = 0; i < f1.path_flows.size(); ++i)
        if (f1.path_flows[i] > f2.path_flows[i] + tol) return false;
    return true;
}

}  // namespace tasr
