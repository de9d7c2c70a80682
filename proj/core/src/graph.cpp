#include "cmst/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace cmst {

EdgeOrderKey edge_order_key(VertexId u, VertexId v, Weight w) {
    return EdgeOrderKey{w, std::min(u, v), std::max(u, v)};
}

bool WeightedGraph::has_vertex(VertexId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t WeightedGraph::index_of(VertexId v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v)
        throw GraphError(GraphErrorKind::InvalidParams,
                         "unknown vertex id " + std::to_string(v));
    return static_cast<std::size_t>(it - vertices_.begin());
}

const std::vector<Neighbor>& WeightedGraph::neighbors(VertexId v) const {
    return adj_[index_of(v)];
}

WeightedGraph build_graph(const std::vector<Edge>& edge_list) {
    WeightedGraph g;
    std::set<VertexId> vset;
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (const Edge& e : edge_list) {
        if (e.u == e.v)
            throw GraphError(GraphErrorKind::SelfLoop,
                             "self-loop at vertex " + std::to_string(e.u));
        if (e.w < 0)
            throw GraphError(GraphErrorKind::InvalidParams,
                             "negative weight on edge (" + std::to_string(e.u) +
                                 "," + std::to_string(e.v) + ")");
        auto p = std::minmax(e.u, e.v);
        if (!pairs.insert({p.first, p.second}).second)
            throw GraphError(GraphErrorKind::DuplicateEdge,
                             "duplicate edge (" + std::to_string(p.first) + "," +
                                 std::to_string(p.second) + ")");
        vset.insert(e.u);
        vset.insert(e.v);
    }
    if (edge_list.empty())
        throw GraphError(GraphErrorKind::InvalidParams,
                         "empty edge list (single-vertex graphs are built via "
                         "generators)");

    g.vertices_.assign(vset.begin(), vset.end());
    g.edges_ = edge_list;
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& a, const Edge& b) { return a.key() < b.key(); });

    g.adj_.resize(g.vertices_.size());
    for (const Edge& e : g.edges_) {
        g.adj_[g.index_of(e.u)].push_back({e.v, e.w});
        g.adj_[g.index_of(e.v)].push_back({e.u, e.w});
    }
    for (auto& nb : g.adj_)
        std::sort(nb.begin(), nb.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });

    // Connectivity via BFS from the first vertex.
    std::vector<char> seen(g.vertices_.size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        std::size_t i = q.front();
        q.pop();
        for (const Neighbor& nb : g.adj_[i]) {
            std::size_t j = g.index_of(nb.id);
            if (!seen[j]) {
                seen[j] = 1;
                ++reached;
                q.push(j);
            }
        }
    }
    if (reached != g.vertices_.size()) {
        VertexId offender = 0;
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) {
                offender = g.vertices_[i];
                break;
            }
        throw GraphError(GraphErrorKind::DisconnectedGraph,
                         "graph is disconnected; vertex " +
                             std::to_string(offender) + " unreachable from " +
                             std::to_string(g.vertices_[0]));
    }
    return g;
}

WeightedGraph single_vertex_graph(VertexId id) {
    if (id < 0)
        throw GraphError(GraphErrorKind::InvalidParams, "negative vertex id");
    WeightedGraph g;
    g.vertices_ = {id};
    g.adj_.resize(1);
    return g;
}

namespace {

std::vector<std::int64_t> bfs_dist(const WeightedGraph& g, std::size_t src) {
    std::vector<std::int64_t> dist(g.n(), -1);
    std::queue<std::size_t> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        std::size_t i = q.front();
        q.pop();
        for (const Neighbor& nb : g.neighbors(g.vertices()[i])) {
            std::size_t j = g.index_of(nb.id);
            if (dist[j] < 0) {
                dist[j] = dist[i] + 1;
                q.push(j);
            }
        }
    }
    return dist;
}

}  // namespace

std::int64_t WeightedGraph::hop_diameter() const {
    std::int64_t diam = 0;
    for (std::size_t s = 0; s < n(); ++s) {
        auto dist = bfs_dist(*this, s);
        for (std::int64_t d : dist) diam = std::max(diam, d);
    }
    return diam;
}

std::int64_t WeightedGraph::eccentricity(VertexId source) const {
    auto dist = bfs_dist(*this, index_of(source));
    std::int64_t ecc = 0;
    for (std::int64_t d : dist) ecc = std::max(ecc, d);
    return ecc;
}

WeightedGraph read_edge_list(std::istream& in) {
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        VertexId u, v;
        Weight w;
        if (!(ls >> u)) continue;  // blank line
        if (!(ls >> v >> w))
            throw GraphError(GraphErrorKind::Io,
                             "malformed edge on line " + std::to_string(lineno));
        edges.push_back({u, v, w});
    }
    return build_graph(edges);
}

WeightedGraph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw GraphError(GraphErrorKind::Io, "cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    for (const Edge& e : g.edges()) {
        EdgeOrderKey k = e.key();
        out << k.lo << ' ' << k.hi << ' ' << k.w << '\n';
    }
}

void write_edge_list_file(const std::string& path, const WeightedGraph& g) {
    std::ofstream out(path);
    if (!out)
        throw GraphError(GraphErrorKind::Io, "cannot open " + path);
    write_edge_list(out, g);
}

}  // namespace cmst
