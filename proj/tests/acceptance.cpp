// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "cmst/checker.hpp"
#include "cmst/generators.hpp"
#include "cmst/mst_protocol.hpp"
#include "cmst/oracle.hpp"
#include "cmst/report.hpp"

using namespace cmst;

namespace {

struct Line {
    std::string id;
    bool pass;
    std::string detail;
};

std::vector<Line> g_lines;

void report(const std::string& id, bool pass, const std::string& detail) {
    g_lines.push_back({id, pass, detail});
    std::cout << id << (pass ? " PASS — " : " FAIL — ") << detail << std::endl;
}

struct Cell {
    GraphFamily fam;
    int b;
};

std::vector<Cell> a1_grid() {
    std::vector<Cell> cells;
    auto add = [&](GraphFamily f) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
            for (int b : {1, 4}) {
                f.seed = seed;
                cells.push_back({f, b});
            }
    };
    GraphFamily f;
    f.family = Family::Path;
    for (std::int64_t n : {2, 3, 17, 64, 129}) {
        f.n = n;
        add(f);
    }
    f = {};
    f.family = Family::Cycle;
    for (std::int64_t n : {3, 16, 65, 128}) {
        f.n = n;
        add(f);
    }
    f = {};
    f.family = Family::Grid;
    for (auto [r, c] : std::vector<std::pair<int, int>>{{2, 2}, {3, 5}, {8, 8}, {16, 12}}) {
        f.rows = r;
        f.cols = c;
        add(f);
    }
    f = {};
    f.family = Family::Star;
    for (std::int64_t n : {2, 5, 33, 256}) {
        f.n = n;
        add(f);
    }
    f = {};
    f.family = Family::Complete;
    for (std::int64_t n : {2, 4, 8, 24, 40}) {
        f.n = n;
        add(f);
    }
    f = {};
    f.family = Family::Lollipop;
    for (auto [c, t] : std::vector<std::pair<int, int>>{{3, 9}, {8, 40}, {20, 160}, {52, 460}}) {
        f.clique = c;
        f.tail = t;
        add(f);
    }
    f = {};
    f.family = Family::GnmConnected;
    for (auto [n, m] :
         std::vector<std::pair<int, int>>{{16, 40}, {64, 192}, {256, 1024}, {512, 2048}}) {
        f.n = n;
        f.m = m;
        add(f);
    }
    return cells;
}

struct CheckedRun {
    MstRunResult result;
    std::vector<std::string> violations;
    bool verified = false;
    std::int64_t max_level = 0;
};

CheckedRun run_cell(const Cell& cell, bool check, StepOrder order = StepOrder::Ascending) {
    auto g = generate(cell.fam);
    MstResult oracle = kruskal_mst(g);
    CheckedRun out;
    MstRunOptions opts;
    opts.bandwidth = cell.b;
    opts.step_order = order;
    std::optional<InvariantChecker> chk;
    if (check) {
        chk.emplace(g, oracle, g.min_vertex_id());
        opts.snapshot = [&chk](const SnapshotView& v) { chk->observe(v); };
    }
    out.result = run_mst(g, opts);
    if (chk) {
        chk->finish();
        out.violations = chk->violations();
    }
    out.verified = out.result.mst_edges == oracle.edges;
    for (const auto& [id, p] : out.result.processes)
        out.max_level = std::max<std::int64_t>(
            out.max_level, dynamic_cast<const MstVertex*>(p.get())->level());
    return out;
}

// ---------------------------------------------------------------------------

void a1_and_invariants() {
    auto cells = a1_grid();
    std::map<std::string, std::vector<std::string>> buckets;
    int mismatches = 0, runs = 0, halving_extra = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (const Cell& cell : cells) {
        CheckedRun r = run_cell(cell, true);
        ++runs;
        if (!r.verified) {
            ++mismatches;
            std::cout << "  unverified: " << cell.fam.describe() << " b=" << cell.b
                      << std::endl;
        }
        for (const std::string& v : r.violations) {
            std::string tag = v.substr(0, v.find(']') + 1);
            if (buckets[tag].size() < 4) buckets[tag].push_back(v);
            else buckets[tag].push_back("");
        }
        // total merging levels <= ceil(log2(2n/k)) + 1
        std::int64_t n = static_cast<std::int64_t>(generate(cell.fam).n());
        std::int64_t k = r.result.k;
        std::int64_t bound = 1;
        std::int64_t lg = 0;
        while ((std::int64_t{1} << lg) * k < 2 * n) ++lg;
        bound = lg + 1;
        if (r.max_level > bound) ++halving_extra;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream d1;
    d1 << runs << " instances, " << mismatches << " oracle mismatches, "
       << static_cast<int>(secs) << "s";
    report("A1", mismatches == 0 && runs >= 300 && secs < 600.0, d1.str());

    auto count = [&](std::initializer_list<const char*> tags) {
        std::size_t c = 0;
        for (const char* t : tags) c += buckets[t].size();
        return c;
    };
    auto sample = [&](std::initializer_list<const char*> tags) {
        for (const char* t : tags)
            if (!buckets[t].empty()) return std::string(" e.g. ") + buckets[t].front();
        return std::string();
    };

    std::size_t forest = count({"[forest]"});
    report("A6", forest == 0,
           "base-forest bounds (count, diameter, size, MST-subset): " +
               std::to_string(forest) + " violations" + sample({"[forest]"}));

    std::size_t colmatch = count({"[coloring]", "[matching]"});
    report("A7", colmatch == 0,
           "coloring proper <=3, CV iteration budget, matching maximal, no orphans: " +
               std::to_string(colmatch) + " violations" +
               sample({"[coloring]", "[matching]"}));

    std::size_t halve = count({"[halving]"}) + static_cast<std::size_t>(halving_extra);
    report("A8", halve == 0,
           "per-level halving and level-count bound: " + std::to_string(halve) +
               " violations" + sample({"[halving]"}));

    std::size_t routing = count({"[intervals]", "[routing]", "[filter]"});
    report("A9", routing == 0,
           "interval nesting, exact tau-path downcast routing, upcast filter: " +
               std::to_string(routing) + " violations" +
               sample({"[intervals]", "[routing]", "[filter]"}));
}

void a2_oracle_of_oracle() {
    std::int64_t mismatches = 0, instances = 0, connected4 = 0;
    // every connected labeled graph on n <= 5 vertices, weights = edge index
    for (int n = 1; n <= 5; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) pairs.push_back({i, j});
        int m = static_cast<int>(pairs.size());
        for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
            std::vector<Edge> edges;
            for (int e = 0; e < m; ++e)
                if (mask & (1u << e))
                    edges.push_back({pairs[static_cast<std::size_t>(e)].first,
                                     pairs[static_cast<std::size_t>(e)].second, e + 1});
            WeightedGraph g = single_vertex_graph(1);
            if (n == 1) {
                if (mask != 0) continue;
            } else {
                bool ok = true;
                try {
                    g = build_graph(edges);
                    if (g.n() != static_cast<std::size_t>(n)) ok = false;
                } catch (const GraphError&) {
                    ok = false;
                }
                if (!ok) continue;
            }
            ++instances;
            if (n == 4) ++connected4;
            if (kruskal_mst(g).edges != exhaustive_mst_small(g).edges) ++mismatches;
        }
    }
    bool enumeration_sane = connected4 == 38;  // known count of connected labeled graphs
    // plus 100 random n=8 instances
    std::mt19937_64 rng(2026);
    for (int t = 0; t < 100; ++t) {
        GraphFamily f;
        f.family = Family::GnmConnected;
        f.n = 8;
        f.m = 7 + static_cast<std::int64_t>(rng() % 22);
        f.seed = rng();
        auto g = generate(f);
        ++instances;
        if (kruskal_mst(g).edges != exhaustive_mst_small(g).edges) ++mismatches;
    }
    report("A2", mismatches == 0 && enumeration_sane,
           std::to_string(instances) + " instances (" + std::to_string(connected4) +
               " connected labeled graphs on 4 vertices), " +
               std::to_string(mismatches) + " mismatches");
}

struct EnvelopeCell {
    std::int64_t n;
    std::uint64_t seed;
    bool lollipop;
};

RunReport envelope_run(const EnvelopeCell& c) {
    GraphFamily f;
    if (c.lollipop) {
        f.family = Family::Lollipop;
        f.clique = c.n / 10;
        f.tail = c.n - c.n / 10;
    } else {
        f.family = Family::GnmConnected;
        f.n = c.n;
        f.m = 4 * c.n;
    }
    f.seed = c.seed;
    auto g = generate(f);
    RunInstanceOptions o;
    return run_instance(g, f.describe(), c.seed, o);
}

void a3_a4_envelopes() {
    std::vector<EnvelopeCell> cal, hold;
    for (std::int64_t n : {64, 128})
        for (std::uint64_t s : {1, 2, 3})
            for (bool l : {false, true}) cal.push_back({n, s, l});
    for (std::int64_t n : {256, 512, 1024})
        for (std::uint64_t s : {1, 2, 3})
            for (bool l : {false, true}) hold.push_back({n, s, l});

    double c3 = 0, c4 = 0;
    bool all_verified = true;
    for (const auto& c : cal) {
        RunReport r = envelope_run(c);
        all_verified &= r.verified;
        c3 = std::max(c3, r.round_ratio);
        c4 = std::max(c4, r.message_ratio);
    }
    bool rounds_ok = true, msgs_ok = true;
    double worst_r = 0, worst_m = 0;
    for (const auto& c : hold) {
        RunReport r = envelope_run(c);
        all_verified &= r.verified;
        worst_r = std::max(worst_r, r.round_ratio / c3);
        worst_m = std::max(worst_m, r.message_ratio / c4);
        if (r.round_ratio > 1.25 * c3) rounds_ok = false;
        if (r.message_ratio > 1.25 * c4) msgs_ok = false;
    }
    std::ostringstream d3, d4;
    d3 << "C3=" << c3 << ", worst holdout/C3=" << worst_r << " (limit 1.25)";
    d4 << "C4=" << c4 << ", worst holdout/C4=" << worst_m << " (limit 1.25)";
    report("A3", rounds_ok && all_verified, d3.str());
    report("A4", msgs_ok && all_verified, d4.str());
}

void a5_bandwidth() {
    GraphFamily f;
    f.family = Family::GnmConnected;
    f.n = 512;
    f.m = 2048;
    f.seed = 7;
    auto g = generate(f);
    MstResult oracle = kruskal_mst(g);
    std::int64_t prev_rounds = -1;
    bool monotone = true, same_set = true, no_trip = true;
    std::ostringstream d;
    d << "rounds:";
    for (int b : {1, 2, 4, 8}) {
        MstRunOptions o;
        o.bandwidth = b;
        try {
            auto r = run_mst(g, o);
            if (prev_rounds >= 0 && r.metrics.rounds > prev_rounds) monotone = false;
            prev_rounds = r.metrics.rounds;
            if (r.mst_edges != oracle.edges) same_set = false;
            d << " b" << b << "=" << r.metrics.rounds;
        } catch (const SimError&) {
            no_trip = false;  // bandwidth invariant tripped inside the engine
        }
    }
    report("A5", monotone && same_set && no_trip,
           d.str() + (monotone ? " non-increasing" : " NOT monotone") +
               (same_set ? ", identical MSTs" : ", MSTs differ"));
}

void a10_determinism() {
    auto cells = a1_grid();
    std::mt19937_64 rng(424242);
    std::set<std::size_t> picked;
    while (picked.size() < 20) picked.insert(rng() % cells.size());
    bool ok = true;
    for (std::size_t i : picked) {
        const Cell& c = cells[i];
        auto r1 = run_cell(c, false);
        auto r2 = run_cell(c, false);
        auto r3 = run_cell(c, false);
        auto rd = run_cell(c, false, StepOrder::Descending);
        std::uint64_t d = r1.result.digest;
        if (r2.result.digest != d || r3.result.digest != d || rd.result.digest != d) {
            ok = false;
            std::cout << "  digest mismatch on " << c.fam.describe() << " b=" << c.b
                      << std::endl;
        }
    }
    report("A10", ok, "20 cells x 3 repeats + reversed step order, all digests equal");
}

}  // namespace

int main() {
    a1_and_invariants();
    a2_oracle_of_oracle();
    a3_a4_envelopes();
    a5_bandwidth();
    a10_determinism();

    bool all = true;
    for (const Line& l : g_lines) all &= l.pass;
    std::cout << (all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES present")
              << std::endl;
    return all ? 0 : 1;
}
