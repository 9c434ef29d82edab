#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace tasr {

using NodeId = int;   // 1-based ids as found in TNTP files
using EdgeId = int;   // 0-based index into Network::edges

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct NoPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One directed roadway segment with its BPR volume-delay parameters.
struct Edge {
    EdgeId id = -1;
    NodeId tail = 0;
    NodeId head = 0;
    double free_flow_time = 0;  // minutes
    double capacity = 0;        // vehicles/hour
    double lambda = 0.15;       // BPR coefficient
    double beta = 4.0;          // BPR exponent
    // carried through from the file but unused by the solvers
    double length = 0;
    double speed = 0;
    double toll = 0;
    int link_type = 0;
};

struct Network {
    std::vector<NodeId> nodes;                    // sorted, unique
    std::vector<Edge> edges;                      // id == index
    std::map<NodeId, std::vector<EdgeId>> adjacency;  // node -> outgoing edge ids

    bool has_node(NodeId n) const { return adjacency.find(n) != adjacency.end(); }
    const Edge& edge(EdgeId e) const { return edges.at(static_cast<size_t>(e)); }

    /// Rebuilds adjacency from the edge list and checks the structural invariants.
    void finalize();
};

struct Commodity {
    NodeId source = 0;
    NodeId destination = 0;
    double demand = 0;  // vehicles/hour
};

struct Path {
    std::vector<EdgeId> edges;  // connected simple walk, tail of first = source
    int commodity = 0;

    bool operator==(const Path& o) const { return edges == o.edges && commodity == o.commodity; }
};

/// Per-commodity working sets of simple paths.
struct PathSet {
    std::vector<std::vector<Path>> per_commodity;

    std::vector<Path> all() const {
        std::vector<Path> out;
        for (const auto& v : per_commodity) out.insert(out.end(), v.begin(), v.end());
        return out;
    }
    size_t total_paths() const {
        size_t n = 0;
        for (const auto& v : per_commodity) n += v.size();
        return n;
    }
};

// TNTP ingestion. Both throw ParseError with a 1-based line number on bad input.
Network parse_network(const std::string& text);
std::vector<Commodity> parse_trips(const std::string& text);

std::string serialize_network(const Network& net);

Network load_network_file(const std::string& path);
std::vector<Commodity> load_trips_file(const std::string& path);

/// Validates the Path invariants (simple, connected, endpoints s -> d).
bool path_is_valid(const Network& net, const Path& p, NodeId s, NodeId d);

double path_free_flow_time(const Network& net, const Path& p);

/// Minimum-total-cost simple path under fixed nonnegative edge costs.
/// Ties are broken toward the smallest lexicographic edge-id sequence.
Path shortest_path(const Network& net, const std::vector<double>& edge_costs,
                   NodeId s, NodeId d, int commodity = 0);

/// The k simple paths with smallest free-flow time, ascending, ties lexicographic.
/// Returns fewer than k when the network has fewer simple paths.
std::vector<Path> enumerate_paths(const Network& net, const Commodity& c, int k, int commodity_index = 0);

/// enumerate_paths for every commodity, as a PathSet.
PathSet build_path_set(const Network& net, const std::vector<Commodity>& commodities, int k);

}  // namespace tasr
