#include "cmst/mst_protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cmst/wire.hpp"

namespace cmst {

namespace wire {

int arity(Word tag) {
    switch (tag) {
        case kJoin: return 2;
        case kConfirm: return 1;
        case kDecline: return 1;
        case kSize: return 4;
        case kInterval: return 3;
        case kGo: return 5;
        case kDiam: return 3;
        case kParticipate: return 2;
        case kSmallFlag: return 2;
        case kMwoe: return 4;
        case kMwoeNone: return 1;
        case kChosen: return 4;
        case kBaseDone: return 1;
        case kAnnounce: return 1;
        case kCandRoot: return 2;
        case kColorDown: return 3;
        case kColorCross: return 3;
        case kColorUp: return 3;
        case kCensus: return 2;
        case kCensusNone: return 1;
        case kSelect: return 2;
        case kSelectCross: return 1;
        case kIMatched: return 1;
        case kIMatchedCross: return 1;
        case kMatchedUp: return 1;
        case kReroot: return 1;
        case kKeepRoot: return 1;
        case kAttach: return 1;
        case kNewId: return 2;
        case kFragId: return 2;
        case kDirEnd: return 1;
        case kLevelZero: return 1;
        case kMwup: return 5;
        case kMwupNone: return 1;
        case kUpEnd: return 1;
        case kDownAdopt: return 4;
        case kDownWinner: return 5;
        case kAdopt: return 3;
        case kWinnerKey: return 4;
        case kMstMark: return 1;
        case kCurFrag: return 2;
        case kTerminate: return 1;
    }
    return 0;
}

}  // namespace wire

// ---------------------------------------------------------------------------
// Pure helpers
// ---------------------------------------------------------------------------

int log_star2(std::int64_t x) {
    int it = 0;
    double v = static_cast<double>(x);
    while (v > 1.0) {
        v = std::log2(v);
        ++it;
    }
    return it;
}

std::int64_t select_k(std::int64_t n, std::int64_t b, std::int64_t ecc) {
    std::int64_t s = static_cast<std::int64_t>(
        std::ceil(std::sqrt(static_cast<double>(n) / static_cast<double>(b))));
    if (s < 1) s = 1;
    return ecc <= s ? s : ecc;
}

namespace {

int bitlen(std::int64_t x) {
    return x <= 0 ? 1 : 64 - std::countl_zero(static_cast<std::uint64_t>(x));
}

}  // namespace

int cv_reduction_steps(std::int64_t max_color) {
    std::int64_t ub = std::max<std::int64_t>(max_color, 1);
    int steps = 0;
    while (ub > 5) {
        ub = 2 * (bitlen(ub) - 1) + 1;
        ++steps;
    }
    return steps;
}

std::int64_t cv_child_color(std::int64_t own, std::int64_t parent) {
    std::int64_t diff = own ^ parent;
    int i = std::countr_zero(static_cast<std::uint64_t>(diff));
    return 2 * i + ((own >> i) & 1);
}

std::int64_t cv_root_color(std::int64_t own) { return own & 1; }

PaletteStep palette_step_kind(int s, int cv_steps) {
    if (s < cv_steps) return PaletteStep::Reduce;
    return (s - cv_steps) % 2 == 0 ? PaletteStep::ShiftDown : PaletteStep::Eliminate;
}

int palette_eliminate_target(int s, int cv_steps) {
    return 5 - (s - cv_steps) / 2;
}

VertexId interval_next_hop(
    const std::vector<std::pair<VertexId, std::pair<std::int64_t, std::int64_t>>>& child_intervals,
    std::int64_t target_lo) {
    for (const auto& [c, itv] : child_intervals)
        if (itv.first <= target_lo && target_lo <= itv.second) return c;
    return -1;
}

// ---------------------------------------------------------------------------
// Base-era schedule
// ---------------------------------------------------------------------------

BaseSchedule BaseSchedule::build(std::int64_t k, std::int64_t n, std::int64_t max_id) {
    BaseSchedule s;
    s.palette_steps = cv_reduction_steps(max_id) + 6;
    std::int64_t t = 0;
    while ((std::int64_t{1} << t) < k) ++t;  // ceil(log2 k)
    s.phases = static_cast<int>(t);
    if (t == 0) {
        // no phases: a single neighbor-update round seeds the level-0 maps
        s.total = 1;
        return s;
    }
    std::int64_t off = 0;
    for (int i = 0; i < s.phases; ++i) {
        PhaseWindows w;
        w.h = std::min<std::int64_t>(std::int64_t{6} << i, std::max<std::int64_t>(n - 1, 1));
        w.color_step_len = 2 * w.h + 3;
        w.match_step_len = w.h + 2;
        w.start = off;
        w.diam = 0;
        w.part = w.diam + (w.h + 2);
        w.mwoe = w.part + (w.h + 2);
        w.chosen = w.mwoe + (w.h + 2);
        w.croot = w.chosen + (w.h + 2);
        w.colors = w.croot + (w.h + 2);
        w.match = w.colors + s.palette_steps * w.color_step_len;
        w.reroot = w.match + 9 * w.match_step_len;
        w.newid = w.reroot + (w.h + 2);
        w.fid = w.newid + (2 * w.h + 4);
        w.end = w.fid + 1;
        off += w.end;
        s.window.push_back(w);
    }
    s.total = off;
    return s;
}

// ---------------------------------------------------------------------------
// MstVertex: construction, plumbing, step dispatch
// ---------------------------------------------------------------------------

MstVertex::MstVertex(VertexId id, const std::vector<Neighbor>& neighbors,
                     const MstConfig& cfg)
    : id_(id), nbrs_(neighbors), cfg_(cfg),
      budget_(static_cast<std::int64_t>(cfg.bandwidth) * cfg.words_per_unit),
      is_root_(id == cfg.root), frag_id_(id) {
    std::sort(nbrs_.begin(), nbrs_.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    subtree_max_id_ = id_;
    // the largest atomic record (tag or coarse id, weight, two endpoints,
    // fragment id) must fit one packet
    if (budget_ < 5)
        throw std::invalid_argument(
            "bandwidth budget below 5 words cannot carry a candidate record");
}

bool MstVertex::is_neighbor(VertexId v) const {
    return std::any_of(nbrs_.begin(), nbrs_.end(),
                       [&](const Neighbor& nb) { return nb.id == v; });
}

Weight MstVertex::weight_to(VertexId v) const {
    for (const Neighbor& nb : nbrs_)
        if (nb.id == v) return nb.w;
    fail("no edge to " + std::to_string(v));
}

void MstVertex::fail(const std::string& what) const {
    throw std::logic_error("protocol error at vertex " + std::to_string(id_) +
                           " round " + std::to_string(round_) + ": " + what);
}

void MstVertex::enqueue(VertexId dst, std::vector<Word> words) {
    OutItem item;
    item.kind = OutItem::Tagged;
    item.words = std::move(words);
    outq_[dst].push_back(std::move(item));
}

void MstVertex::enqueue_capped(VertexId dst, std::vector<Word> words) {
    OutItem item;
    item.kind = OutItem::Capped;
    item.words = std::move(words);
    outq_[dst].push_back(std::move(item));
}

void MstVertex::enqueue_pair(VertexId dst, Word a, Word b) {
    OutItem item;
    item.kind = OutItem::Pair;
    item.words = {a, b};
    outq_[dst].push_back(std::move(item));
}

void MstVertex::pump_outqueues() {
    const std::int64_t pair_cap = budget_ / 2;
    // records ride the tau-parent edge even when nothing else is queued there
    if (tau_parent_ >= 0 && dir_end_sent_) {
        auto it = tau_.find(tau_front_);
        if (it != tau_.end() && !it->second.queued.empty()) outq_[tau_parent_];
    }
    for (auto& [dst, q] : outq_) {
        RoundPacket pkt;
        pkt.dst = dst;
        std::int64_t words = 0;
        std::int64_t pairs = 0;
        // tag-free prefix: directory pairs
        while (!q.empty() && q.front().kind == OutItem::Pair && pairs < pair_cap &&
               words + 2 <= budget_) {
            pkt.payload.insert(pkt.payload.end(), q.front().words.begin(),
                               q.front().words.end());
            words += 2;
            ++pairs;
            q.pop_front();
        }
        // tag-free prefix: candidate records toward the tau parent
        if (pkt.payload.empty() && dst == tau_parent_ && dir_end_sent_ &&
            (q.empty() || q.front().kind != OutItem::Pair)) {
            auto it = tau_.find(tau_front_);
            if (it != tau_.end()) {
                std::int64_t recs = 0;
                auto& queued = it->second.queued;
                while (!queued.empty() && recs < cfg_.bandwidth &&
                       words + 5 <= budget_) {
                    auto qit = queued.begin();
                    const CandidateRecord& r = qit->second;
                    auto& last = it->second.last_sent;
                    auto lit = last.find(r.coarse);
                    if (lit != last.end() && !(r.key < lit->second))
                        fail("filter property violated on upcast");
                    last[r.coarse] = r.key;
                    pkt.payload.insert(pkt.payload.end(),
                                       {r.coarse, r.far, r.key.w, r.key.lo, r.key.hi});
                    words += 5;
                    ++recs;
                    queued.erase(qit);
                }
            }
        }
        // tagged suffix
        std::int64_t capped = 0;
        while (!q.empty() && q.front().kind != OutItem::Pair) {
            std::int64_t sz = static_cast<std::int64_t>(q.front().words.size());
            if (words + sz > budget_) break;
            if (q.front().kind == OutItem::Capped) {
                if (capped >= cfg_.bandwidth) break;
                ++capped;
            }
            pkt.payload.insert(pkt.payload.end(), q.front().words.begin(),
                               q.front().words.end());
            words += sz;
            q.pop_front();
        }
        if (!pkt.payload.empty()) outbox_.push_back(std::move(pkt));
    }
    // idle vertices must not pay for long-gone traffic
    std::erase_if(outq_, [](const auto& e) { return e.second.empty(); });
}

StepResult MstVertex::step(std::int64_t round, std::span<const RoundPacket> inbox) {
    round_ = round;
    outbox_.clear();
    stage_.reset();
    pending_joins_.clear();

    if (round == 1 && is_root_) start_round_one();

    for (const RoundPacket& p : inbox) handle_packet(p);

    pump_tau();

    if (base_start_ >= 0 && round_ >= base_start_) {
        if (round_ < base_end_) {
            if (!base_done_early_) base_step(round_ - base_start_);
        } else {
            if (!base_complete_) begin_levels_era();
            pump_directory();
            pump_levels();
            if (is_root_) {
                rt_check_directory_done();
                rt_maybe_terminate();
            }
        }
    }

    pump_outqueues();

    StepResult res;
    res.outbox = std::move(outbox_);
    res.stage = stage_;
    if (terminate_seen_) {
        halted_ = true;
        res.halt = true;
        for (const auto& [dst, q] : outq_)
            if (!q.empty()) fail("halting with unsent traffic");
    }
    return res;
}

void MstVertex::handle_packet(const RoundPacket& p) {
    const auto& w = p.payload;
    std::size_t i = 0;
    // tag-free prefix: stride 2 = directory pairs, stride 5 = candidate
    // records, switched per incoming edge by kDirEnd
    if (!w.empty() && w[0] >= 0) {
        if (!dirend_recv_[p.src]) {
            while (i < w.size() && w[i] >= 0) {
                if (i + 2 > w.size()) fail("truncated directory pair");
                if (is_root_) {
                    rt_directory_[w[i]] = w[i + 1];
                    rt_base_to_coarse_[w[i]] = w[i];
                } else {
                    dir_out_.push_back({w[i], w[i + 1]});
                }
                i += 2;
            }
        } else {
            while (i < w.size() && w[i] >= 0) {
                if (i + 5 > w.size()) fail("truncated candidate record");
                CandidateRecord rec;
                rec.coarse = w[i];
                rec.far = w[i + 1];
                rec.key = {w[i + 2], w[i + 3], w[i + 4]};
                filter_insert(recv_level_[p.src], rec);
                i += 5;
            }
        }
    }
    while (i < w.size()) {
        int a = wire::arity(w[i]);
        if (a == 0 || i + static_cast<std::size_t>(a) > w.size())
            fail("malformed packet from " + std::to_string(p.src));
        handle_tagged(p.src, &w[i], a);
        i += static_cast<std::size_t>(a);
    }
}

std::vector<Neighbor> MstVertex::mst_edges() const {
    std::vector<Neighbor> out;
    for (VertexId v : mst_nbrs_) out.push_back({v, weight_to(v)});
    return out;
}

// ---------------------------------------------------------------------------
// Harness
// ---------------------------------------------------------------------------

MstRunResult run_mst(const WeightedGraph& g, const MstRunOptions& opts) {
    MstConfig cfg;
    cfg.root = opts.root.value_or(g.min_vertex_id());
    cfg.bandwidth = opts.bandwidth;
    cfg.k_override = opts.k_override;

    SimOptions sim;
    sim.bandwidth = opts.bandwidth;
    sim.words_per_unit = cfg.words_per_unit;
    sim.round_cap = opts.round_cap;
    sim.step_order = opts.step_order;
    sim.snapshot = opts.snapshot;

    SimResult run = run_simulation(
        g,
        [&cfg](VertexId id, const std::vector<Neighbor>& nbrs) {
            return std::make_unique<MstVertex>(id, nbrs, cfg);
        },
        sim);

    MstRunResult out;
    out.metrics = std::move(run.metrics);
    std::map<EdgeOrderKey, int> sides;
    for (auto& [v, proc] : run.processes) {
        auto* mv = dynamic_cast<MstVertex*>(proc.get());
        out.per_vertex[v] = mv->mst_edges();
        for (const Neighbor& nb : out.per_vertex[v])
            sides[edge_order_key(v, nb.id, nb.w)] += 1;
        if (v == cfg.root) {
            out.ecc_rt = mv->known_ecc();
            out.k = mv->chosen_k();
        }
    }
    for (const auto& [key, cnt] : sides) {
        if (cnt != 2)
            throw std::logic_error("MST edge (" + std::to_string(key.lo) + "," +
                                   std::to_string(key.hi) +
                                   ") marked at only one endpoint");
        out.mst_edges.insert(key);
        out.mst_weight += key.w;
    }
    out.digest = replay_digest(out.metrics, out.mst_edges);
    out.processes = std::move(run.processes);
    return out;
}

}  // namespace cmst
