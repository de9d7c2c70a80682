#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <random>

#include "cmst/mst_protocol.hpp"
#include "doctest.h"

using namespace cmst;

TEST_CASE("select_k picks the regime") {
    CHECK(select_k(100, 1, 5) == 10);   // small diameter: k = ceil(sqrt(n))
    CHECK(select_k(100, 1, 40) == 40);  // large diameter: k = ecc
    CHECK(select_k(100, 4, 5) == 5);    // bandwidth shrinks the threshold
    CHECK(select_k(1, 1, 0) == 1);
}

TEST_CASE("log_star2 fixed points") {
    CHECK(log_star2(1) == 0);
    CHECK(log_star2(2) == 1);
    CHECK(log_star2(4) == 2);
    CHECK(log_star2(16) == 3);
    CHECK(log_star2(65536) == 4);
}

TEST_CASE("one color-reduction step") {
    // own 0b101 vs parent 0b001: lowest differing bit 2, own bit there 1
    CHECK(cv_child_color(0b101, 0b001) == 2 * 2 + 1);
    CHECK(cv_child_color(0b101, 0b100) == 2 * 0 + 1);
    CHECK(cv_root_color(0b101) == 1);
    CHECK(cv_root_color(0b100) == 0);
}

TEST_CASE("root rule never collides with a recolored child") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t root = static_cast<std::int64_t>(rng() & 0xffffffff);
        std::int64_t child = static_cast<std::int64_t>(rng() & 0xffffffff);
        if (root == child) continue;
        CHECK(cv_root_color(root) != cv_child_color(child, root));
    }
}

TEST_CASE("reduction step count stays within the log* bound") {
    for (std::int64_t x : {std::int64_t{1}, std::int64_t{5}, std::int64_t{6},
                           std::int64_t{100}, std::int64_t{1} << 20,
                           std::int64_t{1} << 40, std::int64_t{1} << 62}) {
        CHECK(cv_reduction_steps(x) <= log_star2(x) + 6);
    }
    CHECK(cv_reduction_steps(5) == 0);
    CHECK(cv_reduction_steps(6) >= 1);
}

TEST_CASE("palette schedule shape") {
    int t = cv_reduction_steps(1 << 20);
    CHECK(palette_step_kind(0, t) == (t > 0 ? PaletteStep::Reduce : PaletteStep::ShiftDown));
    CHECK(palette_step_kind(t, t) == PaletteStep::ShiftDown);
    CHECK(palette_step_kind(t + 1, t) == PaletteStep::Eliminate);
    CHECK(palette_eliminate_target(t + 1, t) == 5);
    CHECK(palette_eliminate_target(t + 3, t) == 4);
    CHECK(palette_eliminate_target(t + 5, t) == 3);
}

namespace {

// reference simulation of the whole palette pipeline over a rooted forest,
// mirroring the distributed rules exactly
struct ForestColoring {
    std::vector<int> parent;              // -1 for roots
    std::vector<std::vector<std::int64_t>> colors;

    void run(const std::vector<std::int64_t>& ids, int steps, int cv_steps) {
        std::size_t n = parent.size();
        colors.assign(n, {});
        for (std::size_t v = 0; v < n; ++v) colors[v].push_back(ids[v]);
        for (int s = 0; s < steps; ++s) {
            for (std::size_t v = 0; v < n; ++v) {
                std::int64_t cur = colors[v][static_cast<std::size_t>(s)];
                bool root = parent[v] < 0;
                std::int64_t pc =
                    root ? -1
                         : colors[static_cast<std::size_t>(parent[v])][static_cast<std::size_t>(s)];
                auto excl = [](std::int64_t a, std::int64_t b) {
                    for (std::int64_t c = 0; c < 3; ++c)
                        if (c != a && c != b) return c;
                    return std::int64_t{0};
                };
                std::int64_t next = cur;
                switch (palette_step_kind(s, cv_steps)) {
                    case PaletteStep::Reduce:
                        next = root ? cv_root_color(cur) : cv_child_color(cur, pc);
                        break;
                    case PaletteStep::ShiftDown:
                        next = root ? excl(cur, -1) : pc;
                        break;
                    case PaletteStep::Eliminate: {
                        int target = palette_eliminate_target(s, cv_steps);
                        if (cur == target) {
                            std::int64_t kids = colors[v][static_cast<std::size_t>(s) - 1];
                            next = root ? excl(kids, -1) : excl(pc, kids);
                        }
                        break;
                    }
                }
                colors[v].push_back(next);
            }
        }
    }
};

}  // namespace

TEST_CASE("full palette on random forests yields a proper 3-coloring") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 200;
        ForestColoring fc;
        fc.parent.resize(n);
        std::vector<std::int64_t> ids(n);
        std::map<std::int64_t, int> used;
        for (std::size_t v = 0; v < n; ++v) {
            fc.parent[v] = v == 0 || rng() % 7 == 0
                               ? -1
                               : static_cast<int>(rng() % v);  // forest shape
            do {
                ids[v] = static_cast<std::int64_t>(rng() & 0x7fffffff);
            } while (used.count(ids[v]));
            used[ids[v]] = 1;
        }
        std::int64_t max_id = 0;
        for (auto id : ids) max_id = std::max(max_id, id);
        int cv = cv_reduction_steps(max_id);
        fc.run(ids, cv + 6, cv);
        for (std::size_t v = 0; v < n; ++v) {
            std::int64_t final = fc.colors[v].back();
            CHECK(final >= 0);
            CHECK(final <= 2);
            if (fc.parent[v] >= 0)
                CHECK(final != fc.colors[static_cast<std::size_t>(fc.parent[v])].back());
        }
    }
}

TEST_CASE("interval routing picks the unique containing child") {
    std::vector<std::pair<VertexId, std::pair<std::int64_t, std::int64_t>>> kids = {
        {10, {2, 4}}, {20, {5, 6}}};
    CHECK(interval_next_hop(kids, 5) == 20);
    CHECK(interval_next_hop(kids, 3) == 10);
    CHECK(interval_next_hop(kids, 7) == -1);
}

TEST_CASE("base schedule phase count is ceil(log2 k)") {
    CHECK(BaseSchedule::build(1, 16, 100).phases == 0);
    CHECK(BaseSchedule::build(2, 16, 100).phases == 1);
    CHECK(BaseSchedule::build(8, 64, 100).phases == 3);
    CHECK(BaseSchedule::build(9, 64, 100).phases == 4);
    CHECK(BaseSchedule::build(1, 16, 100).total == 1);  // just the seed round

    auto s = BaseSchedule::build(8, 64, 100);
    std::int64_t prev_end = 0;
    for (const auto& w : s.window) {
        CHECK(w.start == prev_end);
        prev_end = w.start + w.end;
    }
    CHECK(prev_end == s.total);
}
