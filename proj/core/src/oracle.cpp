#include "cmst/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace cmst {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

MstResult result_from_edges(const WeightedGraph& g,
                            const std::vector<Edge>& chosen) {
    MstResult r;
    for (const Edge& e : chosen) {
        r.edges.insert(e.key());
        r.total_weight += e.w;
        r.incidence[e.u].push_back(e.v);
        r.incidence[e.v].push_back(e.u);
    }
    for (VertexId v : g.vertices()) r.incidence[v];  // singletons appear too
    for (auto& [v, nbrs] : r.incidence) std::sort(nbrs.begin(), nbrs.end());
    return r;
}

}  // namespace

MstResult kruskal_mst(const WeightedGraph& g) {
    std::vector<Edge> order(g.edges().begin(), g.edges().end());
    std::sort(order.begin(), order.end(),
              [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    UnionFind uf(g.n());
    std::vector<Edge> chosen;
    for (const Edge& e : order)
        if (uf.unite(g.index_of(e.u), g.index_of(e.v))) chosen.push_back(e);
    return result_from_edges(g, chosen);
}

std::optional<SpanningTreeViolation> validate_spanning_tree(
    const WeightedGraph& g, const std::set<EdgeOrderKey>& edges) {
    if (edges.size() != g.n() - 1)
        return SpanningTreeViolation{"expected " + std::to_string(g.n() - 1) +
                                     " edges, got " + std::to_string(edges.size())};
    std::set<EdgeOrderKey> graph_keys;
    for (const Edge& e : g.edges()) graph_keys.insert(e.key());
    UnionFind uf(g.n());
    for (const EdgeOrderKey& k : edges) {
        if (!graph_keys.count(k))
            return SpanningTreeViolation{"edge (" + std::to_string(k.lo) + "," +
                                         std::to_string(k.hi) + ") not in graph"};
        if (!uf.unite(g.index_of(k.lo), g.index_of(k.hi)))
            return SpanningTreeViolation{"cycle/duplicate at edge (" +
                                         std::to_string(k.lo) + "," +
                                         std::to_string(k.hi) + ")"};
    }
    // n-1 acyclic edges over n vertices always span; nothing more to check.
    return std::nullopt;
}

MstResult exhaustive_mst_small(const WeightedGraph& g) {
    if (g.n() > 8)
        throw GraphError(GraphErrorKind::InvalidParams,
                         "exhaustive oracle limited to n <= 8");
    if (g.n() == 1) return result_from_edges(g, {});

    const auto& all = g.edges();
    std::size_t m = all.size();
    std::size_t need = g.n() - 1;
    std::vector<std::size_t> pick(need);
    std::iota(pick.begin(), pick.end(), std::size_t{0});

    std::optional<MstResult> best;
    std::vector<EdgeOrderKey> best_keys, cand_keys;

    auto consider = [&]() {
        UnionFind uf(g.n());
        std::vector<Edge> chosen;
        for (std::size_t idx : pick) {
            const Edge& e = all[idx];
            if (!uf.unite(g.index_of(e.u), g.index_of(e.v))) return;
            chosen.push_back(e);
        }
        Weight total = 0;
        cand_keys.clear();
        for (const Edge& e : chosen) {
            total += e.w;
            cand_keys.push_back(e.key());
        }
        std::sort(cand_keys.begin(), cand_keys.end());
        if (!best || total < best->total_weight ||
            (total == best->total_weight && cand_keys < best_keys)) {
            best = result_from_edges(g, chosen);
            best_keys = cand_keys;
        }
    };

    // iterate all need-subsets of [0, m)
    while (true) {
        consider();
        std::size_t i = need;
        while (i > 0 && pick[i - 1] == m - (need - i) - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < need; ++j) pick[j] = pick[j - 1] + 1;
    }
    return *best;
}

}  // namespace cmst
