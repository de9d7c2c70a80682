#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmst/graph.hpp"

namespace cmst {

/// Ground-truth MST of a graph under the EdgeOrderKey total order.
struct MstResult {
    std::set<EdgeOrderKey> edges;
    Weight total_weight = 0;
    /// vertex id -> sorted incident MST neighbors
    std::map<VertexId, std::vector<VertexId>> incidence;
};

/// Kruskal with union-find over the EdgeOrderKey order. The result is the
/// unique minimum spanning tree of the graph.
MstResult kruskal_mst(const WeightedGraph& g);

struct SpanningTreeViolation {
    std::string what;
};

/// Checks |edges| == n-1, membership in g, acyclicity and connectivity.
/// Returns nullopt when the edge set is a spanning tree of g.
std::optional<SpanningTreeViolation> validate_spanning_tree(
    const WeightedGraph& g, const std::set<EdgeOrderKey>& edges);

/// Brute force over all (n-1)-edge subsets; the oracle for the oracle.
/// Only for n <= 8.
MstResult exhaustive_mst_small(const WeightedGraph& g);

}  // namespace cmst
