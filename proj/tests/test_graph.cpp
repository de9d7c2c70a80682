#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sstream>

#include "cmst/generators.hpp"
#include "cmst/graph.hpp"
#include "doctest.h"

using namespace cmst;

TEST_CASE("edge_order_key normalizes endpoints") {
    EdgeOrderKey k = edge_order_key(7, 3, 5);
    CHECK(k.w == 5);
    CHECK(k.lo == 3);
    CHECK(k.hi == 7);
}

TEST_CASE("edge_order_key breaks weight ties by ids") {
    CHECK(edge_order_key(1, 2, 3) < edge_order_key(1, 3, 3));
    CHECK(edge_order_key(9, 8, 2) < edge_order_key(1, 2, 3));
}

TEST_CASE("build_graph accepts a single edge") {
    auto g = build_graph({{1, 2, 5}});
    CHECK(g.n() == 2);
    CHECK(g.m() == 1);
    CHECK(g.neighbors(1).size() == 1);
    CHECK(g.neighbors(1)[0].id == 2);
}

TEST_CASE("build_graph accepts equal weights") {
    auto g = build_graph({{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
    CHECK(g.n() == 3);
    CHECK(g.m() == 3);
}

TEST_CASE("build_graph rejects bad input") {
    CHECK_THROWS_AS(build_graph({{1, 2, 1}, {3, 4, 1}}), GraphError);  // disconnected
    CHECK_THROWS_AS(build_graph({{1, 1, 2}}), GraphError);             // self loop
    CHECK_THROWS_AS(build_graph({{1, 2, 1}, {2, 1, 3}}), GraphError);  // duplicate
    try {
        build_graph({{1, 2, 1}, {3, 4, 1}});
    } catch (const GraphError& e) {
        CHECK(e.kind() == GraphErrorKind::DisconnectedGraph);
    }
}

TEST_CASE("adjacency lists are sorted by neighbor id") {
    auto g = build_graph({{5, 1, 1}, {5, 9, 1}, {5, 3, 2}, {1, 3, 7}, {9, 1, 4}});
    const auto& nb = g.neighbors(5);
    for (std::size_t i = 1; i < nb.size(); ++i) CHECK(nb[i - 1].id < nb[i].id);
}

TEST_CASE("hop_diameter on fixed shapes") {
    CHECK(single_vertex_graph(3).hop_diameter() == 0);

    GraphFamily p;
    p.family = Family::Path;
    p.n = 5;
    CHECK(generate(p).hop_diameter() == 4);

    GraphFamily c;
    c.family = Family::Complete;
    c.n = 6;
    CHECK(generate(c).hop_diameter() == 1);
}

namespace {

// independent oracle: Floyd-Warshall over unweighted adjacency
std::int64_t fw_diameter(const WeightedGraph& g) {
    std::size_t n = g.n();
    const std::int64_t inf = 1 << 20;
    std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const Edge& e : g.edges()) {
        std::size_t i = g.index_of(e.u), j = g.index_of(e.v);
        d[i][j] = d[j][i] = 1;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    std::int64_t diam = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, d[i][j]);
    return diam;
}

}  // namespace

TEST_CASE("hop_diameter agrees with Floyd-Warshall on n <= 64") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        GraphFamily f;
        f.family = Family::GnmConnected;
        f.n = 6 + static_cast<std::int64_t>(seed) * 9;
        f.m = f.n + 2 * static_cast<std::int64_t>(seed);
        f.seed = seed;
        auto g = generate(f);
        CHECK(g.hop_diameter() == fw_diameter(g));
    }
}

TEST_CASE("edge list io round trip, comments and sorting") {
    std::istringstream in(
        "# a comment\n"
        "2 1 5\n"
        "\n"
        "3 2 4   # trailing comment\n");
    auto g = read_edge_list(in);
    CHECK(g.n() == 3);
    CHECK(g.m() == 2);

    std::ostringstream out;
    write_edge_list(out, g);
    CHECK(out.str() == "2 3 4\n1 2 5\n");  // sorted by EdgeOrderKey

    std::istringstream back(out.str());
    auto g2 = read_edge_list(back);
    CHECK(g2.edges().size() == g.edges().size());
    for (std::size_t i = 0; i < g.edges().size(); ++i)
        CHECK(g.edges()[i].key() == g2.edges()[i].key());
}
