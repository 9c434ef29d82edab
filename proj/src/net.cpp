#include "tasr/net.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace tasr {

void Network::finalize() {
    std::set<NodeId> node_set;
    std::set<std::pair<NodeId, NodeId>> seen;
    adjacency.clear();
    for (size_t i = 0; i < edges.size(); ++i) {
        Edge& e = edges[i];
        e.id = static_cast<EdgeId>(i);
        if (e.free_flow_time <= 0) throw DataError("edge " + std::to_string(i) + ": free_flow_time must be > 0");
        if (e.capacity <= 0) throw DataError("edge " + std::to_string(i) + ": capacity must be > 0");
        if (e.lambda < 0) throw DataError("edge " + std::to_string(i) + ": lambda must be >= 0");
        if (e.beta < 1) throw DataError("edge " + std::to_string(i) + ": beta must be >= 1");
        if (!seen.insert({e.tail, e.head}).second)
            throw DataError("duplicate edge " + std::to_string(e.tail) + "->" + std::to_string(e.head));
        node_set.insert(e.tail);
        node_set.insert(e.head);
        adjacency[e.tail].push_back(e.id);
    }
    for (NodeId n : nodes) node_set.insert(n);
    nodes.assign(node_set.begin(), node_set.end());
    for (NodeId n : nodes) adjacency.emplace(n, std::vector<EdgeId>{});
}

namespace {

struct LineReader {
    std::istringstream in;
    int line_no = 0;
    explicit LineReader(const std::string& text) : in(text) {}
    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        ++line_no;
        return true;
    }
};

std::string strip_comment(const std::string& s) {
    auto pos = s.find('~');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_number(const std::string& tok, int line) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "non-numeric field '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError(line, "non-numeric field '" + tok + "'");
    return v;
}

// Metadata header: `<KEY> value` lines up to <END OF METADATA>. Returns the map.
std::map<std::string, std::string> parse_metadata(LineReader& rd, std::string& pending) {
    std::map<std::string, std::string> meta;
    bool terminated = false;
    std::string line;
    while (rd.next(line)) {
        std::string s = strip_comment(line);
        if (blank(s)) continue;
        auto lt = s.find('<');
        if (lt == std::string::npos) {
            pending = line;  // first data line, re-processed by the caller
            break;
        }
        auto gt = s.find('>', lt);
        if (gt == std::string::npos) throw ParseError(rd.line_no, "unterminated metadata tag");
        std::string key = s.substr(lt + 1, gt - lt - 1);
        std::string value = s.substr(gt + 1);
        auto b = value.find_first_not_of(" \t\r");
        value = b == std::string::npos ? "" : value.substr(b);
        auto e = value.find_last_not_of(" \t\r");
        if (e != std::string::npos) value = value.substr(0, e + 1);
        meta[key] = value;
        if (key == "END OF METADATA") {
            terminated = true;
            break;
        }
    }
    if (!terminated) throw ParseError(rd.line_no, "missing <END OF METADATA>");
    return meta;
}

}  // namespace

Network parse_network(const std::string& text) {
    LineReader rd(text);
    std::string pending;
    auto meta = parse_metadata(rd, pending);

    long declared_links = -1, declared_nodes = -1;
    if (auto it = meta.find("NUMBER OF LINKS"); it != meta.end())
        declared_links = static_cast<long>(parse_number(it->second, rd.line_no));
    if (auto it = meta.find("NUMBER OF NODES"); it != meta.end())
        declared_nodes = static_cast<long>(parse_number(it->second, rd.line_no));

    Network net;
    std::vector<std::string> tokens;
    int record_start_line = 0;
    std::string line;
    while (rd.next(line)) {
        std::string s = strip_comment(line);
        if (blank(s)) continue;
        std::istringstream ls(s);
        std::string tok;
        while (ls >> tok) {
            // a ';' terminates the record; it may be glued to the last field
            if (tok == ";") {
                // record complete
            } else if (tok.back() == ';') {
                tok.pop_back();
                tokens.push_back(tok);
            } else {
                if (tokens.empty()) record_start_line = rd.line_no;
                tokens.push_back(tok);
                continue;
            }
            if (tokens.size() < 10)
                throw ParseError(rd.line_no, "link record has " + std::to_string(tokens.size()) + " fields, expected 10");
            Edge e;
            e.tail = static_cast<NodeId>(parse_number(tokens[0], rd.line_no));
            e.head = static_cast<NodeId>(parse_number(tokens[1], rd.line_no));
            e.capacity = parse_number(tokens[2], rd.line_no);
            e.length = parse_number(tokens[3], rd.line_no);
            e.free_flow_time = parse_number(tokens[4], rd.line_no);
            e.lambda = parse_number(tokens[5], rd.line_no);
            e.beta = parse_number(tokens[6], rd.line_no);
            e.speed = parse_number(tokens[7], rd.line_no);
            e.toll = parse_number(tokens[8], rd.line_no);
            e.link_type = static_cast<int>(parse_number(tokens[9], rd.line_no));
            if (e.lambda == 0) e.lambda = 0.15;
            if (e.beta == 0) e.beta = 4.0;
            if (e.capacity <= 0) throw ParseError(rd.line_no, "capacity must be positive");
            if (e.free_flow_time <= 0) throw ParseError(rd.line_no, "free_flow_time must be positive");
            tokens.clear();
            net.edges.push_back(e);
        }
    }
    if (!tokens.empty())
        throw ParseError(record_start_line, "link record without terminating semicolon");
    if (declared_links >= 0 && declared_links != static_cast<long>(net.edges.size()))
        throw ParseError(rd.line_no, "expected " + std::to_string(declared_links) + " links, found " +
                                         std::to_string(net.edges.size()));
    if (net.edges.empty() && declared_nodes > 0)
        for (NodeId n = 1; n <= declared_nodes; ++n) net.nodes.push_back(n);
    try {
        net.finalize();
    } catch (const DataError& e) {
        throw ParseError(rd.line_no, e.what());
    }
    if (!net.edges.empty() && declared_nodes > 0 && declared_nodes != static_cast<long>(net.nodes.size()))
        throw ParseError(rd.line_no, "header declares " + std::to_string(declared_nodes) + " nodes, records imply " +
                                         std::to_string(net.nodes.size()));
    return net;
}

std::vector<Commodity> parse_trips(const std::string& text) {
    LineReader rd(text);
    std::string pending;
    auto meta = parse_metadata(rd, pending);

    double declared_total = -1;
    if (auto it = meta.find("TOTAL OD FLOW"); it != meta.end())
        declared_total = parse_number(it->second, rd.line_no);

    std::vector<Commodity> out;
    double total = 0;
    NodeId origin = 0;
    bool have_origin = false;

    auto handle = [&](const std::string& raw, int line_no) {
        std::string s = strip_comment(raw);
        if (blank(s)) return;
        std::istringstream ls(s);
        std::string tok;
        ls >> tok;
        if (tok == "Origin") {
            std::string o;
            if (!(ls >> o)) throw ParseError(line_no, "Origin line missing node id");
            origin = static_cast<NodeId>(parse_number(o, line_no));
            have_origin = true;
            // entries may continue on the origin line itself
            std::string rest;
            std::getline(ls, rest);
            if (blank(rest)) return;
            s = rest;
        }
        if (!have_origin) throw ParseError(line_no, "trip entry before any Origin line");
        // entries are "dest : flow ;", several per line allowed
        std::istringstream es(s);
        std::string dest_tok, colon, flow_tok;
        while (es >> dest_tok) {
            if (!(es >> colon) || colon != ":")
                throw ParseError(line_no, "malformed trip entry, expected 'dest : flow ;'");
            if (!(es >> flow_tok)) throw ParseError(line_no, "malformed trip entry, missing flow");
            bool closed = false;
            if (flow_tok.back() == ';') {
                flow_tok.pop_back();
                closed = true;
            } else {
                std::string semi;
                if (es >> semi && semi == ";") closed = true;
            }
            if (!closed) throw ParseError(line_no, "trip entry without terminating semicolon");
            NodeId dest = static_cast<NodeId>(parse_number(dest_tok, line_no));
            double flow = parse_number(flow_tok, line_no);
            if (flow < 0) throw ParseError(line_no, "negative demand");
            total += flow;
            if (flow > 0 && dest != origin) out.push_back({origin, dest, flow});
        }
    };

    if (!pending.empty()) handle(pending, rd.line_no);
    std::string line;
    while (rd.next(line)) handle(line, rd.line_no);

    if (declared_total > 0) {
        double rel = std::abs(total - declared_total) / declared_total;
        if (rel > 1e-6)
            throw ParseError(rd.line_no, "trip total " + std::to_string(total) + " does not match header " +
                                             std::to_string(declared_total));
    }
    return out;
}

std::string serialize_network(const Network& net) {
    std::ostringstream os;
    os << "<NUMBER OF NODES> " << net.nodes.size() << "\n";
    os << "<NUMBER OF LINKS> " << net.edges.size() << "\n";
    os << "<END OF METADATA>\n";
    os << "~ init term capacity length fft b power speed toll type ;\n";
    os.precision(17);
    for (const Edge& e : net.edges) {
        os << e.tail << " " << e.head << " " << e.capacity << " " << e.length << " " << e.free_flow_time << " "
           << e.lambda << " " << e.beta << " " << e.speed << " " << e.toll << " " << e.link_type << " ;\n";
    }
    return os.str();
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

Network load_network_file(const std::string& path) { return parse_network(read_file(path)); }
std::vector<Commodity> load_trips_file(const std::string& path) { return parse_trips(read_file(path)); }

bool path_is_valid(const Network& net, const Path& p, NodeId s, NodeId d) {
    if (p.edges.empty()) return false;
    std::set<NodeId> visited;
    NodeId at = s;
    visited.insert(at);
    for (EdgeId eid : p.edges) {
        if (eid < 0 || eid >= static_cast<EdgeId>(net.edges.size())) return false;
        const Edge& e = net.edge(eid);
        if (e.tail != at) return false;
        at = e.head;
        if (!visited.insert(at).second) return false;
    }
    return at == d;
}

double path_free_flow_time(const Network& net, const Path& p) {
    double t = 0;
    for (EdgeId e : p.edges) t += net.edge(e).free_flow_time;
    return t;
}

namespace {

// lexicographic comparison of edge-id sequences
bool lex_less(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct SpLabel {
    double dist = std::numeric_limits<double>::infinity();
    EdgeId parent_edge = -1;
    bool settled = false;
};

std::vector<EdgeId> reconstruct(const Network& net, const std::map<NodeId, SpLabel>& labels, NodeId d) {
    std::vector<EdgeId> seq;
    NodeId at = d;
    while (true) {
        auto it = labels.find(at);
        if (it == labels.end() || it->second.parent_edge < 0) break;
        seq.push_back(it->second.parent_edge);
        at = net.edge(it->second.parent_edge).tail;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// Dijkstra over a subset of usable edges, deterministic lexicographic tie-break.
bool dijkstra(const Network& net, const std::vector<double>& cost, const std::vector<bool>& edge_ok,
              const std::set<NodeId>& node_banned, NodeId s, NodeId d, std::vector<EdgeId>& out_seq,
              double& out_cost) {
    std::map<NodeId, SpLabel> labels;
    labels[s].dist = 0;
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
        auto [dist, u] = pq.top();
        pq.pop();
        SpLabel& lu = labels[u];
        if (lu.settled || dist > lu.dist) continue;
        lu.settled = true;
        auto adj = net.adjacency.find(u);
        if (adj == net.adjacency.end()) continue;
        for (EdgeId eid : adj->second) {
            if (!edge_ok[static_cast<size_t>(eid)]) continue;
            const Edge& e = net.edge(eid);
            if (node_banned.count(e.head)) continue;
            double nd = lu.dist + cost[static_cast<size_t>(eid)];
            SpLabel& lv = labels[e.head];
            if (nd < lv.dist - 1e-15) {
                lv.dist = nd;
                lv.parent_edge = eid;
                pq.push({nd, e.head});
            } else if (std::abs(nd - lv.dist) <= 1e-15 && lv.parent_edge >= 0) {
                // equal cost: keep the lexicographically smaller edge sequence
                auto cand_prefix = reconstruct(net, labels, u);
                cand_prefix.push_back(eid);
                auto cur = reconstruct(net, labels, e.head);
                if (lex_less(cand_prefix, cur)) {
                    lv.parent_edge = eid;
                    pq.push({nd, e.head});
                }
            }
        }
    }
    auto it = labels.find(d);
    if (it == labels.end() || !std::isfinite(it->second.dist)) return false;
    out_seq = reconstruct(net, labels, d);
    out_cost = it->second.dist;
    return !out_seq.empty() || s == d;
}

}  // namespace

Path shortest_path(const Network& net, const std::vector<double>& edge_costs, NodeId s, NodeId d, int commodity) {
    if (edge_costs.size() != net.edges.size()) throw DataError("edge cost vector size mismatch");
    for (double c : edge_costs)
        if (!(c >= 0) || !std::isfinite(c)) throw DataError("edge costs must be finite and nonnegative");
    if (!net.has_node(s) || !net.has_node(d)) throw NoPathError("endpoint not in network");
    std::vector<bool> ok(net.edges.size(), true);
    std::vector<EdgeId> seq;
    double cost;
    if (!dijkstra(net, edge_costs, ok, {}, s, d, seq, cost))
        throw NoPathError("no path from " + std::to_string(s) + " to " + std::to_string(d));
    Path p;
    p.edges = seq;
    p.commodity = commodity;
    return p;
}

std::vector<Path> enumerate_paths(const Network& net, const Commodity& c, int k, int commodity_index) {
    if (k < 1) throw DataError("k must be >= 1");
    std::vector<double> fft(net.edges.size());
    for (size_t i = 0; i < net.edges.size(); ++i) fft[i] = net.edges[i].free_flow_time;

    auto path_key = [&](const std::vector<EdgeId>& seq) {
        double t = 0;
        for (EdgeId e : seq) t += fft[static_cast<size_t>(e)];
        return t;
    };
    auto less_cand = [&](const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
        double ta = path_key(a), tb = path_key(b);
        if (std::abs(ta - tb) > 1e-12) return ta < tb;
        return lex_less(a, b);
    };

    std::vector<std::vector<EdgeId>> accepted;
    std::vector<std::vector<EdgeId>> candidates;

    std::vector<bool> all_ok(net.edges.size(), true);
    std::vector<EdgeId> first;
    double cost0;
    if (!dijkstra(net, fft, all_ok, {}, c.source, c.destination, first, cost0))
        throw NoPathError("no path from " + std::to_string(c.source) + " to " + std::to_string(c.destination));
    accepted.push_back(first);

    // Yen-style deviations
    while (static_cast<int>(accepted.size()) < k) {
        const auto& last = accepted.back();
        std::vector<EdgeId> root;
        for (size_t i = 0; i < last.size(); ++i) {
            // root = last[0..i), spur node = tail of last[i]
            std::vector<bool> ok(net.edges.size(), true);
            std::set<NodeId> banned;
            for (const auto& acc : accepted) {
                if (acc.size() >= i && std::equal(root.begin(), root.end(), acc.begin()))
                    if (acc.size() > i) ok[static_cast<size_t>(acc[i])] = false;
            }
            NodeId at = c.source;
            for (size_t j = 0; j < i; ++j) {
                banned.insert(at);
                at = net.edge(root[j]).head;
            }
            std::vector<EdgeId> spur_seq;
            double sc;
            if (dijkstra(net, fft, ok, banned, at, c.destination, spur_seq, sc)) {
                std::vector<EdgeId> full = root;
                full.insert(full.end(), spur_seq.begin(), spur_seq.end());
                if (std::find(accepted.begin(), accepted.end(), full) == accepted.end() &&
                    std::find(candidates.begin(), candidates.end(), full) == candidates.end())
                    candidates.push_back(full);
            }
            root.push_back(last[i]);
        }
        if (candidates.empty()) break;
        auto best = std::min_element(candidates.begin(), candidates.end(), less_cand);
        accepted.push_back(*best);
        candidates.erase(best);
    }

    std::sort(accepted.begin(), accepted.end(), less_cand);
    std::vector<Path> out;
    for (auto& seq : accepted) {
        Path p;
        p.edges = std::move(seq);
        p.commodity = commodity_index;
        out.push_back(std::move(p));
    }
    return out;
}

PathSet build_path_set(const Network& net, const std::vector<Commodity>& commodities, int k) {
    PathSet ps;
    ps.per_commodity.resize(commodities.size());
    for (size_t i = 0; i < commodities.size(); ++i)
        ps.per_commodity[i] = enumerate_paths(net, commodities[i], k, static_cast<int>(i));
    return ps;
}

}  // namespace tasr
