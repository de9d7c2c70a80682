#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cmst/generators.hpp"
#include "cmst/mst_protocol.hpp"
#include "cmst/report.hpp"
#include "doctest.h"

using namespace cmst;

TEST_CASE("rerunning a cell reproduces its report bit-exactly") {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = 48;
    f.m = 140;
    f.seed = 11;
    auto g = generate(f);
    RunInstanceOptions o;
    o.check_invariants = true;
    auto a = run_instance(g, f.describe(), f.seed, o);
    auto b = run_instance(g, f.describe(), f.seed, o);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.verified);
    CHECK(a.invariant_violations.empty());
    CHECK(a.diameter >= a.ecc_rt);
    CHECK(a.diameter <= 2 * a.ecc_rt);
}

TEST_CASE("normalization envelopes are positive and scale") {
    CHECK(round_envelope(256, 10, 1) == doctest::Approx((10 + 16.0) * 8.0));
    CHECK(round_envelope(256, 10, 4) < round_envelope(256, 10, 1));
    CHECK(message_envelope(64, 192, 63) > 192 * 6);
}

TEST_CASE("directory upcast finishes within its pipelining bound") {
    for (std::uint64_t s : {1ull, 2ull, 3ull}) {
        GraphFamily f;
        f.family = Family::GnmConnected;
        f.n = 64;
        f.m = 192;
        f.seed = s;
        auto g = generate(f);
        MstRunOptions o;
        o.k_override = 8;
        auto r = run_mst(g, o);
        const auto* root =
            dynamic_cast<const MstVertex*>(r.processes.at(g.min_vertex_id()).get());
        std::int64_t f0 = root->base_fragment_count();
        std::int64_t ecc = root->known_ecc();
        REQUIRE(r.metrics.stages.count("directory") == 1);
        // depth(tau) + ceil(|F| / floor(B/2)) + 1
        CHECK(r.metrics.stages.at("directory").rounds <= ecc + (f0 + 1) / 2 + 1);
    }
}

TEST_CASE("report json carries the instance descriptor and ratios") {
    GraphFamily f;
    f.family = Family::Star;
    f.n = 9;
    f.seed = 2;
    auto g = generate(f);
    RunInstanceOptions o;
    auto rep = run_instance(g, "star n=9 seed=2", 2, o);
    auto js = rep.to_json();
    CHECK(js.find("\"instance\":\"star n=9 seed=2\"") != std::string::npos);
    CHECK(js.find("\"verified\":true") != std::string::npos);
    CHECK(rep.round_ratio > 0);
    CHECK(rep.message_ratio > 0);
}
