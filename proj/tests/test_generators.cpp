#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "cmst/generators.hpp"
#include "doctest.h"

using namespace cmst;

TEST_CASE("path has n-1 edges and full diameter") {
    GraphFamily f;
    f.family = Family::Path;
    f.n = 5;
    f.seed = 3;
    auto g = generate(f);
    CHECK(g.n() == 5);
    CHECK(g.m() == 4);
    CHECK(g.hop_diameter() == 4);
}

TEST_CASE("lollipop 10+90 lands in the large-diameter regime") {
    GraphFamily f;
    f.family = Family::Lollipop;
    f.clique = 10;
    f.tail = 90;
    f.seed = 1;
    auto g = generate(f);
    CHECK(g.n() == 100);
    // farthest pair: a non-attachment clique vertex to the tail end
    CHECK(g.hop_diameter() == 91);
    CHECK(g.hop_diameter() * g.hop_diameter() > 100);  // D > sqrt(n)
}

TEST_CASE("generation is a pure function of (family, params, seed)") {
    for (Family fam : {Family::Path, Family::Cycle, Family::Star, Family::Complete,
                       Family::GnmConnected, Family::Lollipop}) {
        GraphFamily f;
        f.family = fam;
        f.n = 8;
        f.m = 12;
        f.clique = 3;
        f.tail = 5;
        f.seed = 42;
        auto a = generate(f);
        auto b = generate(f);
        REQUIRE(a.m() == b.m());
        for (std::size_t i = 0; i < a.edges().size(); ++i) {
            CHECK(a.edges()[i].u == b.edges()[i].u);
            CHECK(a.edges()[i].v == b.edges()[i].v);
            CHECK(a.edges()[i].w == b.edges()[i].w);
        }
    }
    GraphFamily gr;
    gr.family = Family::Grid;
    gr.rows = 3;
    gr.cols = 4;
    gr.seed = 7;
    CHECK(generate(gr).m() == generate(gr).m());
}

TEST_CASE("weights stay in [1, n^2]") {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = 30;
    f.m = 100;
    f.seed = 9;
    auto g = generate(f);
    for (const Edge& e : g.edges()) {
        CHECK(e.w >= 1);
        CHECK(e.w <= 900);
    }
}

TEST_CASE("edge keys are injective over any generated graph") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GraphFamily f;
        f.family = Family::GnmConnected;
        f.n = 24;
        f.m = 80;
        f.seed = seed;
        auto g = generate(f);
        std::set<EdgeOrderKey> keys;
        for (const Edge& e : g.edges()) CHECK(keys.insert(e.key()).second);
    }
}

TEST_CASE("vertex identities are distinct and not assumed contiguous") {
    GraphFamily f;
    f.family = Family::Path;
    f.n = 20;
    f.seed = 5;
    auto g = generate(f);
    std::set<VertexId> ids(g.vertices().begin(), g.vertices().end());
    CHECK(ids.size() == 20);
}

TEST_CASE("grid shape") {
    GraphFamily f;
    f.family = Family::Grid;
    f.rows = 4;
    f.cols = 6;
    f.seed = 1;
    auto g = generate(f);
    CHECK(g.n() == 24);
    CHECK(g.m() == 4 * 5 + 3 * 6);  // horizontal + vertical
    CHECK(g.hop_diameter() == 3 + 5);
}

TEST_CASE("invalid parameters are rejected") {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = 8;
    f.m = 3;  // below n-1
    CHECK_THROWS_AS(generate(f), GraphError);
    f.m = 100;  // above n(n-1)/2
    CHECK_THROWS_AS(generate(f), GraphError);
    GraphFamily c;
    c.family = Family::Cycle;
    c.n = 2;
    CHECK_THROWS_AS(generate(c), GraphError);
}

TEST_CASE("single-vertex path") {
    GraphFamily f;
    f.family = Family::Path;
    f.n = 1;
    f.seed = 2;
    auto g = generate(f);
    CHECK(g.n() == 1);
    CHECK(g.m() == 0);
    CHECK(g.hop_diameter() == 0);
}
