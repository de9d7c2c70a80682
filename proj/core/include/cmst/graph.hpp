#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmst {

using VertexId = std::int64_t;
using Weight = std::int64_t;

/// Total order on edges: lexicographic on (weight, smaller id, larger id).
/// Every weight comparison in the project goes through this key, which is
/// what makes the MST unique even when weights repeat.
struct EdgeOrderKey {
    Weight w = 0;
    VertexId lo = 0;
    VertexId hi = 0;

    friend auto operator<=>(const EdgeOrderKey&, const EdgeOrderKey&) = default;
};

/// Builds the key for the edge {u,v}; endpoints are normalized so lo < hi.
EdgeOrderKey edge_order_key(VertexId u, VertexId v, Weight w);

struct Edge {
    VertexId u = 0;
    VertexId v = 0;
    Weight w = 0;

    EdgeOrderKey key() const { return edge_order_key(u, v, w); }
};

struct Neighbor {
    VertexId id = 0;
    Weight w = 0;
};

enum class GraphErrorKind {
    SelfLoop,
    DuplicateEdge,
    DisconnectedGraph,
    InvalidParams,
    Io,
};

class GraphError : public std::runtime_error {
public:
    GraphError(GraphErrorKind kind, std::string msg)
        : std::runtime_error(std::move(msg)), kind_(kind) {}
    GraphErrorKind kind() const { return kind_; }

private:
    GraphErrorKind kind_;
};

/// Immutable simple connected undirected graph with weighted edges.
/// Vertex identities are arbitrary distinct non-negative integers.
/// Adjacency lists are sorted by neighbor id.
class WeightedGraph {
public:
    std::size_t n() const { return vertices_.size(); }
    std::size_t m() const { return edges_.size(); }

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_vertex(VertexId v) const;
    /// Dense index of a vertex id, in [0, n). Ids are not assumed contiguous.
    std::size_t index_of(VertexId v) const;
    const std::vector<Neighbor>& neighbors(VertexId v) const;

    VertexId min_vertex_id() const { return vertices_.front(); }
    VertexId max_vertex_id() const { return vertices_.back(); }

    /// Max over vertex pairs of the unweighted shortest-path length.
    /// Centralized (all-sources BFS); used for metrics and tests only.
    std::int64_t hop_diameter() const;

    /// Eccentricity of one vertex (max BFS distance from it).
    std::int64_t eccentricity(VertexId source) const;

    friend WeightedGraph build_graph(const std::vector<Edge>& edge_list);
    friend WeightedGraph single_vertex_graph(VertexId id);

private:
    std::vector<VertexId> vertices_;             // sorted
    std::vector<Edge> edges_;                    // sorted by EdgeOrderKey
    std::vector<std::vector<Neighbor>> adj_;     // by dense index, sorted by id
};

/// Validates and builds a graph. Throws GraphError on self-loops, duplicate
/// pairs or a disconnected result, naming the offending vertex/edge.
WeightedGraph build_graph(const std::vector<Edge>& edge_list);

/// The one connected graph an edge list cannot express.
WeightedGraph single_vertex_graph(VertexId id);

/// Edge-list text format: one edge per line "u v w", '#' comments and blank
/// lines ignored. The writer emits edges sorted by EdgeOrderKey.
WeightedGraph read_edge_list(std::istream& in);
WeightedGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list_file(const std::string& path, const WeightedGraph& g);

}  // namespace cmst
