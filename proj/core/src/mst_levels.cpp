#include <algorithm>

#include "cmst/mst_protocol.hpp"
#include "cmst/wire.hpp"

// Self-paced era on top of the finished base forest. Base-fragment roots
// inject their (fragment id, interval lo) pairs into a pipelined upcast; rt
// then drives Boruvka levels: per-fragment minimum crossing edges converge
// over the base trees, a filtered pipelined convergecast carries one best
// record per coarse fragment to rt, rt contracts the fragment graph locally
// and downcasts (new id, winning key) records along interval routes. End
// markers frame the per-level record streams on every tau edge.

namespace cmst {

using namespace wire;

void MstVertex::begin_levels_era() {
    base_complete_ = true;
    cur_frag_ = frag_id_;
    nbr_cur_ = nbr_frag_;
    for (const Neighbor& nb : nbrs_) nbr_cur_version_[nb.id] = 0;
    level_ = 0;
    fl_ = FragLevel{};
    if (frag_parent_ < 0) {
        if (is_root_) {
            rt_directory_[frag_id_] = ilo_;
            rt_base_to_coarse_[frag_id_] = frag_id_;
        } else {
            dir_out_.push_back({frag_id_, ilo_});
        }
    }
    if (is_root_) stage_ = "directory";
}

void MstVertex::pump_directory() {
    if (dir_end_sent_) return;
    while (!dir_out_.empty()) {
        auto [f, lo] = dir_out_.front();
        dir_out_.pop_front();
        enqueue_pair(tau_parent_, f, lo);
    }
    if (dir_child_ends_ == tau_children_.size()) {
        if (!is_root_) enqueue(tau_parent_, {kDirEnd});
        dir_end_sent_ = true;
    }
}

void MstVertex::rt_check_directory_done() {
    if (rt_fcount_ >= 0 || !dir_end_sent_) return;
    rt_fcount_ = static_cast<std::int64_t>(rt_directory_.size());
    if (rt_fcount_ == 1) {
        // the base forest is already the MST
        stage_ = "finalize";
        terminate_seen_ = true;
        for (VertexId c : tau_children_) enqueue(c, {kTerminate});
    } else {
        stage_ = "boruvka_phase_0";
        level0_enabled_ = true;
        for (VertexId c : tau_children_) enqueue(c, {kLevelZero});
    }
}

void MstVertex::pump_levels() {
    try_send_mwup();
    try_send_records_end();
    if (is_root_ && rt_fcount_ > 1) {
        auto& T = tau_[rt_level_];
        bool inject_done = frag_parent_ >= 0 ||
                           level_ > rt_level_ ||
                           (level_ == rt_level_ && fl_.sent);
        if (T.child_ends == tau_children_.size() && inject_done) rt_root_merge();
    }
}

void MstVertex::try_send_mwup() {
    if (!base_complete_ || final_level_ || fl_.sent) return;
    if (level_ == 0 && !level0_enabled_) return;
    if (fl_.reports < frag_children_.size()) return;
    for (const Neighbor& nb : nbrs_)
        if (nbr_cur_version_.at(nb.id) < level_) return;  // stale neighbor
    for (const Neighbor& nb : nbrs_) {
        std::int64_t far = nbr_cur_.at(nb.id);
        if (far == cur_frag_) continue;
        CandidateRecord rec;
        rec.coarse = cur_frag_;
        rec.far = far;
        rec.key = edge_order_key(id_, nb.id, nb.w);
        if (rec.better_than(fl_.best)) fl_.best = rec;
    }
    fl_.sent = true;
    if (frag_parent_ >= 0) {
        if (fl_.best)
            enqueue(frag_parent_, {kMwup, fl_.best->key.w, fl_.best->key.lo,
                                   fl_.best->key.hi, fl_.best->far});
        else
            enqueue(frag_parent_, {kMwupNone});
    } else if (fl_.best) {
        fl_.best->coarse = cur_frag_;
        filter_insert(level_, *fl_.best);
    }
}

void MstVertex::filter_insert(int level, const CandidateRecord& rec) {
    auto& T = tau_[level];
    auto it = T.best.find(rec.coarse);
    if (it != T.best.end() && !(rec.key < it->second.key)) return;
    T.best[rec.coarse] = rec;
    if (!is_root_) T.queued[rec.coarse] = rec;
}

void MstVertex::try_send_records_end() {
    if (is_root_ || !base_complete_ || !dir_end_sent_) return;
    if (tau_front_ == 0 && !level0_enabled_) return;
    if (tau_front_ > 0 && level_ < tau_front_) return;
    if (final_level_ && tau_front_ == level_) return;  // aborted level
    auto& T = tau_[tau_front_];
    if (T.end_sent) return;
    if (T.child_ends < tau_children_.size()) return;
    if (!T.queued.empty()) return;
    if (frag_parent_ < 0) {
        if (level_ < tau_front_) return;
        if (level_ == tau_front_ && !fl_.sent) return;
    }
    enqueue(tau_parent_, {kUpEnd});
    T.end_sent = true;
    ++tau_front_;
}

void MstVertex::rt_root_merge() {
    auto& T = tau_[rt_level_];

    std::set<std::int64_t> coarse;
    for (const auto& [b, c] : rt_base_to_coarse_) coarse.insert(c);
    for (std::int64_t c : coarse)
        if (!T.best.count(c))
            fail("coarse fragment " + std::to_string(c) +
                 " reported no crossing edge with " +
                 std::to_string(rt_fcount_) + " fragments left");

    std::map<std::int64_t, std::int64_t> parent;
    for (std::int64_t c : coarse) parent[c] = c;
    auto find = [&](std::int64_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [c, rec] : T.best) {
        if (!coarse.count(rec.far))
            fail("candidate far side " + std::to_string(rec.far) +
                 " is not a live coarse fragment");
        std::int64_t a = find(c), b = find(rec.far);
        if (a != b) parent[a] = b;
    }
    std::map<std::int64_t, std::int64_t> comp_id;  // representative -> min member
    for (std::int64_t c : coarse) {
        std::int64_t r = find(c);
        auto it = comp_id.find(r);
        if (it == comp_id.end() || c < it->second) comp_id[r] = c;
    }
    std::int64_t new_count = static_cast<std::int64_t>(comp_id.size());
    if (new_count >= rt_fcount_)
        fail("StalledMerge: " + std::to_string(rt_fcount_) + " -> " +
             std::to_string(new_count));
    bool final = new_count == 1;

    rt_chosen_ = T.best;
    std::map<std::int64_t, std::int64_t> next;
    for (const auto& [b, c] : rt_base_to_coarse_) next[b] = comp_id.at(find(c));

    for (const auto& [b, lo] : rt_directory_) {
        std::int64_t oldc = rt_base_to_coarse_.at(b);
        const CandidateRecord& win = rt_chosen_.at(oldc);
        route_down({kDownAdopt, lo, next.at(b), final ? 1 : 0});
        route_down({kDownWinner, lo, win.key.w, win.key.lo, win.key.hi});
    }

    rt_base_to_coarse_ = std::move(next);
    rt_fcount_ = new_count;
    ++rt_level_;
    if (final)
        rt_terminating_ = true;
    else
        rt_pending_stage_level_ = rt_level_;
}

void MstVertex::route_down(std::vector<Word> rec) {
    std::int64_t lo = rec[1];
    if (lo == ilo_) {
        consume_downcast(rec.data(), static_cast<int>(rec.size()));
        return;
    }
    VertexId hop = -1;
    for (const auto& [c, itv] : child_itv_)
        if (itv.first <= lo && lo <= itv.second) {
            hop = c;
            break;
        }
    if (hop < 0)
        fail("NoSuchChild: no child interval contains " + std::to_string(lo));
    enqueue_capped(hop, std::move(rec));
}

void MstVertex::consume_downcast(const Word* w, int len) {
    (void)len;
    if (frag_parent_ >= 0) fail("downcast record landed at a non-root vertex");
    if (w[0] == kDownAdopt) {
        for (VertexId c : frag_children_) enqueue(c, {kAdopt, w[2], w[3]});
        apply_adopt(w[2], w[3] != 0);
    } else {
        for (VertexId c : frag_children_) enqueue(c, {kWinnerKey, w[2], w[3], w[4]});
        apply_winner(w[2], w[3], w[4]);
    }
}

void MstVertex::apply_adopt(std::int64_t new_id, bool final) {
    cur_frag_ = new_id;
    ++level_;
    fl_ = FragLevel{};
    final_level_ = final;
    if (!final)
        for (const Neighbor& nb : nbrs_) enqueue(nb.id, {kCurFrag, new_id});
    try_send_mwup();
}

void MstVertex::apply_winner(Weight w, VertexId a, VertexId b) {
    if (id_ != a && id_ != b) return;
    VertexId other = id_ == a ? b : a;
    if (!is_neighbor(other) || weight_to(other) != w)
        fail("winner edge not incident here");
    mst_nbrs_.insert(other);
    enqueue(other, {kMstMark});
}

void MstVertex::rt_maybe_terminate() {
    auto capped_pending = [&]() {
        for (const auto& [dst, q] : outq_)
            for (const OutItem& item : q)
                if (item.kind == OutItem::Capped) return true;
        return false;
    };
    if (rt_pending_stage_level_ >= 0 && !capped_pending()) {
        stage_ = "boruvka_phase_" + std::to_string(rt_pending_stage_level_);
        rt_pending_stage_level_ = -1;
    }
    if (!rt_terminating_ || terminate_seen_) return;
    if (rt_terminate_round_ < 0) {
        if (capped_pending()) return;
        // all downcast records dispatched; wait out the worst-case tail:
        // routing (ecc + queueing) + fragment broadcast + mark + slack
        std::int64_t f0 = static_cast<std::int64_t>(rt_directory_.size());
        std::int64_t hb = std::min<std::int64_t>(
            std::int64_t{6} << sched_.phases, std::max<std::int64_t>(n_ - 1, 1));
        std::int64_t queueing = (2 * f0 + cfg_.bandwidth - 1) / cfg_.bandwidth;
        rt_terminate_round_ = round_ + ecc_ + queueing + hb + 6;
        return;
    }
    if (round_ >= rt_terminate_round_) {
        stage_ = "finalize";
        terminate_seen_ = true;
        for (VertexId c : tau_children_) enqueue(c, {kTerminate});
    }
}

}  // namespace cmst
