#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cmst/generators.hpp"
#include "cmst/graph.hpp"
#include "cmst/sim.hpp"
#include "doctest.h"

using namespace cmst;

namespace {

// each vertex sends its id to all neighbors once and halts when it has
// heard from every neighbor
struct Echo : VertexProcess {
    VertexId id;
    std::vector<Neighbor> nbrs;
    std::size_t heard = 0;

    Echo(VertexId v, const std::vector<Neighbor>& n) : id(v), nbrs(n) {}

    StepResult step(std::int64_t round, std::span<const RoundPacket> inbox) override {
        StepResult r;
        heard += inbox.size();
        if (round == 1)
            for (const Neighbor& nb : nbrs) r.outbox.push_back({id, nb.id, {id}});
        if (heard == nbrs.size() && round > 1) r.halt = true;
        if (nbrs.empty()) r.halt = true;
        return r;
    }
};

WeightedGraph triangle() {
    return build_graph({{1, 2, 1}, {2, 3, 1}, {1, 3, 1}});
}

}  // namespace

TEST_CASE("echo on a triangle: two rounds, six messages") {
    auto g = triangle();
    auto res = run_simulation(g, [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Echo>(v, n);
    });
    CHECK(res.metrics.rounds == 2);
    CHECK(res.metrics.messages == 6);
    CHECK(res.metrics.words == 6);
}

TEST_CASE("single vertex: at least one round, zero messages") {
    auto g = single_vertex_graph(7);
    auto res = run_simulation(g, [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Echo>(v, n);
    });
    CHECK(res.metrics.rounds >= 1);
    CHECK(res.metrics.messages == 0);
}

namespace {

struct Blaster : VertexProcess {
    VertexId id;
    std::vector<Neighbor> nbrs;
    int words;
    VertexId fake_dst;
    Blaster(VertexId v, const std::vector<Neighbor>& n, int w, VertexId fake = -1)
        : id(v), nbrs(n), words(w), fake_dst(fake) {}
    StepResult step(std::int64_t round, std::span<const RoundPacket>) override {
        StepResult r;
        if (round == 1 && id == 1) {
            VertexId dst = fake_dst >= 0 ? fake_dst : nbrs.front().id;
            r.outbox.push_back({id, dst, std::vector<Word>(static_cast<std::size_t>(words), 1)});
        }
        r.halt = round >= 2;
        return r;
    }
};

}  // namespace

TEST_CASE("payload over the bandwidth budget is rejected") {
    auto g = triangle();
    auto factory = [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Blaster>(v, n, 6);
    };
    SimOptions opts;  // b=1, 5 words per unit
    CHECK_THROWS_AS(run_simulation(g, factory, opts), SimError);
    try {
        run_simulation(g, factory, opts);
    } catch (const SimError& e) {
        CHECK(e.kind() == SimErrorKind::BandwidthExceeded);
        CHECK(e.vertex() == 1);
        CHECK(e.round() == 1);
    }
    // the same payload fits once b covers it
    SimOptions wide;
    wide.bandwidth = 2;
    auto res = run_simulation(g, factory, wide);
    CHECK(res.metrics.words == 6);
    CHECK(res.metrics.messages == 1);
}

TEST_CASE("sending to a non-neighbor is rejected") {
    auto g = triangle();
    auto factory = [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Blaster>(v, n, 1, 99);
    };
    CHECK_THROWS_AS(run_simulation(g, factory), SimError);
}

namespace {

struct Stager : VertexProcess {
    VertexId id;
    explicit Stager(VertexId v) : id(v) {}
    StepResult step(std::int64_t round, std::span<const RoundPacket>) override {
        StepResult r;
        if (id == 1) {
            if (round == 1) r.stage = "bfs";
            if (round == 5) r.stage = "merge";
        }
        r.halt = round >= 6;
        return r;
    }
};

struct Mute : VertexProcess {
    StepResult step(std::int64_t round, std::span<const RoundPacket>) override {
        StepResult r;
        r.halt = round >= 3;
        return r;
    }
};

struct Forever : VertexProcess {
    StepResult step(std::int64_t, std::span<const RoundPacket>) override { return {}; }
};

}  // namespace

TEST_CASE("stage labels scope round accounting") {
    auto g = triangle();
    auto res = run_simulation(g, [](VertexId v, const std::vector<Neighbor>&) {
        return std::make_unique<Stager>(v);
    });
    CHECK(res.metrics.stages.at("bfs").rounds == 4);    // rounds 1..4
    CHECK(res.metrics.stages.at("merge").rounds == 2);  // rounds 5..6
    CHECK(res.metrics.stages.count("default") == 0);
}

TEST_CASE("without stage calls everything accrues to default") {
    auto g = triangle();
    auto res = run_simulation(g, [](VertexId, const std::vector<Neighbor>&) {
        return std::make_unique<Mute>();
    });
    CHECK(res.metrics.stages.at("default").rounds == res.metrics.rounds);
}

TEST_CASE("stage sums equal totals and words respect the budget bound") {
    auto g = triangle();
    auto res = run_simulation(g, [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Echo>(v, n);
    });
    std::int64_t r = 0, m = 0, w = 0;
    for (const auto& [label, c] : res.metrics.stages) {
        r += c.rounds;
        m += c.messages;
        w += c.words;
    }
    CHECK(r == res.metrics.rounds);
    CHECK(m == res.metrics.messages);
    CHECK(w == res.metrics.words);
    CHECK(res.metrics.words <= res.metrics.messages * 5);
}

TEST_CASE("livelocked protocols hit the round cap") {
    auto g = triangle();
    SimOptions opts;
    opts.round_cap = 32;
    auto factory = [](VertexId, const std::vector<Neighbor>&) {
        return std::make_unique<Forever>();
    };
    CHECK_THROWS_AS(run_simulation(g, factory, opts), SimError);
    try {
        run_simulation(g, factory, opts);
    } catch (const SimError& e) {
        CHECK(e.kind() == SimErrorKind::RoundLimitExceeded);
    }
}

TEST_CASE("digest is stable across runs and step orders") {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = 12;
    f.m = 20;
    f.seed = 4;
    auto g = generate(f);
    auto factory = [](VertexId v, const std::vector<Neighbor>& n) {
        return std::make_unique<Echo>(v, n);
    };
    SimOptions asc, desc;
    desc.step_order = StepOrder::Descending;
    auto a = run_simulation(g, factory, asc);
    auto b = run_simulation(g, factory, desc);
    auto c = run_simulation(g, factory, asc);
    std::set<EdgeOrderKey> none;
    CHECK(replay_digest(a.metrics, none) == replay_digest(b.metrics, none));
    CHECK(replay_digest(a.metrics, none) == replay_digest(c.metrics, none));
}

TEST_CASE("metrics serialize to json") {
    RunMetrics m;
    m.rounds = 3;
    m.messages = 5;
    m.words = 9;
    m.stages["bfs"] = {3, 5, 9};
    CHECK(m.to_json() ==
          "{\"rounds\":3,\"messages\":5,\"words\":9,"
          "\"stages\":{\"bfs\":{\"rounds\":3,\"messages\":5,\"words\":9}}}");
}
