#include <algorithm>

#include "cmst/mst_protocol.hpp"
#include "cmst/wire.hpp"

// BFS tree construction, subtree-size convergecast, interval labeling and the
// one-shot GO broadcast that synchronizes the start of the base-forest era.
//
// BFS is layered flooding: the root sends JOIN in round 1; a vertex adopts
// the smallest-id sender of the first round in which offers arrive, then
// confirms to its parent and declines everything else, so every JOIN gets
// exactly one response and local completion is detectable.

namespace cmst {

using namespace wire;

void MstVertex::start_round_one() {
    joined_ = true;
    depth_ = 0;
    subtree_max_depth_ = 0;
    stage_ = "bfs";
    for (const Neighbor& nb : nbrs_) enqueue(nb.id, {kJoin, 0});
    joins_sent_ = static_cast<int>(nbrs_.size());
}

void MstVertex::pump_tau() {
    // adopt a parent / decline offers
    if (!pending_joins_.empty()) {
        std::size_t start = 0;
        if (!joined_) {
            auto best = std::min_element(pending_joins_.begin(), pending_joins_.end());
            joined_ = true;
            tau_parent_ = best->first;
            depth_ = best->second + 1;
            subtree_max_depth_ = depth_;
            enqueue(tau_parent_, {kConfirm});
            for (const Neighbor& nb : nbrs_)
                if (nb.id != tau_parent_) enqueue(nb.id, {kJoin, depth_});
            joins_sent_ = static_cast<int>(nbrs_.size()) - 1;
            for (const auto& [src, d] : pending_joins_)
                if (src != tau_parent_) enqueue(src, {kDecline});
            start = pending_joins_.size();  // all handled above
        }
        for (std::size_t i = start; i < pending_joins_.size(); ++i)
            enqueue(pending_joins_[i].first, {kDecline});
        pending_joins_.clear();
    }

    if (joined_ && !bfs_done_ && responses_ == joins_sent_) bfs_done_ = true;

    if (bfs_done_ && !size_sent_ && size_reports_ == tau_children_.size()) {
        size_sent_ = true;
        if (is_root_) {
            root_finish_sizes();
        } else {
            enqueue(tau_parent_,
                    {kSize, subtree_size_, subtree_max_id_, subtree_max_depth_});
        }
    }

    if (is_root_ && go_round_ == round_) {
        for (VertexId c : tau_children_) enqueue(c, {kGo, max_id_, ecc_, k_, n_});
        on_go(max_id_, ecc_, k_, n_);
    }
}

void MstVertex::root_finish_sizes() {
    n_ = subtree_size_;
    max_id_ = subtree_max_id_;
    ecc_ = subtree_max_depth_;
    k_ = cfg_.k_override.value_or(select_k(n_, cfg_.bandwidth, ecc_));
    stage_ = "intervals";
    ilo_ = 1;
    ihi_ = n_;
    assign_child_intervals(1, n_);
    go_round_ = round_ + 1;  // one round behind the interval wave
}

void MstVertex::assign_child_intervals(std::int64_t lo, std::int64_t hi) {
    std::int64_t next = lo + 1;  // position lo is this vertex's own slot
    for (VertexId c : tau_children_) {  // ascending id
        std::int64_t sz = child_size_.at(c);
        child_itv_[c] = {next, next + sz - 1};
        enqueue(c, {kInterval, next, next + sz - 1});
        next += sz;
    }
    if (next != hi + 1) fail("interval arithmetic off");
}

void MstVertex::on_go(std::int64_t max_id, std::int64_t ecc, std::int64_t k,
                      std::int64_t n) {
    max_id_ = max_id;
    ecc_ = ecc;
    k_ = k;
    n_ = n;
    sched_ = BaseSchedule::build(k_, n_, max_id_);
    base_start_ = round_ + (ecc_ - depth_) + 1;
    base_end_ = base_start_ + sched_.total;
    // base fragments start as singletons; every neighbor's fragment identity
    // is its vertex identity
    frag_id_ = id_;
    frag_parent_ = -1;
    frag_children_.clear();
    for (const Neighbor& nb : nbrs_) nbr_frag_[nb.id] = nb.id;
}

// ---------------------------------------------------------------------------
// tau-era message handling (shared dispatcher lives here)
// ---------------------------------------------------------------------------

void MstVertex::handle_tagged(VertexId src, const Word* w, int len) {
    (void)len;
    switch (w[0]) {
        case kJoin:
            pending_joins_.push_back({src, w[1]});
            return;
        case kConfirm:
            tau_children_.insert(src);
            ++responses_;
            return;
        case kDecline:
            ++responses_;
            return;
        case kSize:
            subtree_size_ += w[1];
            subtree_max_id_ = std::max(subtree_max_id_, w[2]);
            subtree_max_depth_ = std::max(subtree_max_depth_, w[3]);
            child_size_[src] = w[1];
            ++size_reports_;
            return;
        case kInterval:
            ilo_ = w[1];
            ihi_ = w[2];
            assign_child_intervals(ilo_, ihi_);
            return;
        case kGo:
            for (VertexId c : tau_children_) enqueue(c, {kGo, w[1], w[2], w[3], w[4]});
            on_go(w[1], w[2], w[3], w[4]);
            return;

        // ---- base forest era ----
        case kDiam: {
            std::int64_t h = w[1];
            if (h > ph_.h1) {
                ph_.h2 = ph_.h1;
                ph_.h1 = h;
            } else if (h > ph_.h2) {
                ph_.h2 = h;
            }
            ph_.through = std::max(ph_.through, w[2]);
            ++ph_.diam_reports;
            try_send_diam();
            return;
        }
        case kParticipate: {
            ph_.small = w[1] != 0;
            ph_.small_known = true;
            if (!ph_.small) ph_.id_final = true;
            for (VertexId c : frag_children_) enqueue(c, {kParticipate, w[1]});
            return;
        }
        case kSmallFlag:
            nbr_small_[src] = w[1] != 0;
            return;
        case kMwoe: {
            EdgeOrderKey key{w[1], w[2], w[3]};
            if (!ph_.best || key < *ph_.best) {
                ph_.best = key;
                ph_.best_via = src;
            }
            ++ph_.mwoe_reports;
            try_send_mwoe();
            return;
        }
        case kMwoeNone:
            ++ph_.mwoe_reports;
            try_send_mwoe();
            return;
        case kChosen: {
            EdgeOrderKey key{w[1], w[2], w[3]};
            ph_.frag_mwoe = key;
            for (VertexId c : frag_children_) enqueue(c, {kChosen, w[1], w[2], w[3]});
            if (id_ == key.lo || id_ == key.hi) {
                ph_.i_am_owner = true;
                ph_.cross_nbr = id_ == key.lo ? key.hi : key.lo;
                if (!is_neighbor(ph_.cross_nbr)) fail("MWOE endpoint mismatch");
            }
            return;
        }
        case kBaseDone:
            base_done_early_ = true;
            for (VertexId c : frag_children_) enqueue(c, {kBaseDone});
            return;
        case kAnnounce: {
            if (ph_.i_am_owner && ph_.cross_nbr == src) {
                // mutual MWOE: the higher-identity fragment becomes the parent
                ph_.ann_from_cross = true;
                if (frag_id_ > nbr_frag_.at(src))
                    ph_.foreign.push_back({nbr_frag_.at(src), src, false});
            } else {
                ph_.foreign.push_back({nbr_frag_.at(src), src, false});
            }
            return;
        }
        case kCandRoot:
            if (frag_parent_ < 0)
                ph_.candidate_root = w[1] != 0;
            else
                enqueue(frag_parent_, {kCandRoot, w[1]});
            return;
        case kColorDown: {
            for (VertexId c : frag_children_) enqueue(c, {kColorDown, w[1], w[2]});
            for (const ForeignChild& fc : ph_.foreign)
                enqueue(fc.nbr, {kColorCross, w[1], w[2]});
            return;
        }
        case kColorCross:
            if (frag_parent_ < 0)
                ph_.parent_color[static_cast<int>(w[1])] = w[2];
            else
                enqueue(frag_parent_, {kColorUp, w[1], w[2]});
            return;
        case kColorUp:
            if (frag_parent_ < 0)
                ph_.parent_color[static_cast<int>(w[1])] = w[2];
            else
                enqueue(frag_parent_, {kColorUp, w[1], w[2]});
            return;
        case kCensus:
            if (!ph_.cen_min || w[1] < *ph_.cen_min) {
                ph_.cen_min = w[1];
                ph_.cen_via = src;
            }
            ++ph_.cen_reports;
            try_send_census();
            return;
        case kCensusNone:
            ++ph_.cen_reports;
            try_send_census();
            return;
        case kSelect: {
            if (ph_.cen_via >= 0) {
                enqueue(ph_.cen_via, {kSelect, w[1]});
            } else {
                for (ForeignChild& fc : ph_.foreign)
                    if (fc.frag == w[1]) {
                        fc.matched = true;
                        enqueue(fc.nbr, {kSelectCross});
                        return;
                    }
                fail("selected child not held here");
            }
            return;
        }
        case kSelectCross:
            if (frag_parent_ < 0)
                ph_.matched = true;
            else
                enqueue(frag_parent_, {kMatchedUp});
            return;
        case kMatchedUp:
            if (frag_parent_ < 0)
                ph_.matched = true;
            else
                enqueue(frag_parent_, {kMatchedUp});
            return;
        case kIMatched:
            if (ph_.best_via < 0)
                enqueue(ph_.cross_nbr, {kIMatchedCross});
            else
                enqueue(ph_.best_via, {kIMatched});
            return;
        case kIMatchedCross:
            for (ForeignChild& fc : ph_.foreign)
                if (fc.nbr == src) {
                    fc.matched = true;
                    return;
                }
            fail("IMatched for unknown foreign child");
            return;
        case kReroot:
            frag_children_.insert(src);
            ph_.rerooting = true;
            if (ph_.best_via < 0) {
                frag_parent_ = ph_.cross_nbr;
                ph_.attach_due = true;
            } else {
                frag_children_.erase(ph_.best_via);
                frag_parent_ = ph_.best_via;
                enqueue(ph_.best_via, {kReroot});
            }
            return;
        case kKeepRoot:
            ph_.id_final = true;
            for (VertexId c : frag_children_) enqueue(c, {kKeepRoot});
            return;
        case kAttach:
            frag_children_.insert(src);
            mst_nbrs_.insert(src);
            if (ph_.id_final) enqueue(src, {kNewId, frag_id_});
            return;
        case kNewId:
            frag_id_ = w[1];
            ph_.id_final = true;
            for (VertexId c : frag_children_) enqueue(c, {kNewId, w[1]});
            return;
        case kFragId:
            nbr_frag_[src] = w[1];
            return;

        // ---- directory / levels era ----
        case kDirEnd:
            ++dir_child_ends_;
            dirend_recv_[src] = true;
            return;
        case kLevelZero:
            level0_enabled_ = true;
            for (VertexId c : tau_children_) enqueue(c, {kLevelZero});
            return;
        case kMwup: {
            CandidateRecord rec;
            rec.coarse = cur_frag_;
            rec.key = {w[1], w[2], w[3]};
            rec.far = w[4];
            if (rec.better_than(fl_.best)) fl_.best = rec;
            ++fl_.reports;
            try_send_mwup();
            return;
        }
        case kMwupNone:
            ++fl_.reports;
            try_send_mwup();
            return;
        case kUpEnd: {
            int lvl = recv_level_[src];
            ++tau_[lvl].child_ends;
            ++recv_level_[src];
            return;
        }
        case kDownAdopt:
        case kDownWinner:
            route_down(std::vector<Word>(w, w + len));
            return;
        case kAdopt:
            for (VertexId c : frag_children_) enqueue(c, {kAdopt, w[1], w[2]});
            apply_adopt(w[1], w[2] != 0);
            return;
        case kWinnerKey:
            for (VertexId c : frag_children_) enqueue(c, {kWinnerKey, w[1], w[2], w[3]});
            apply_winner(w[1], w[2], w[3]);
            return;
        case kMstMark:
            mst_nbrs_.insert(src);
            return;
        case kCurFrag:
            nbr_cur_[src] = w[1];
            ++nbr_cur_version_[src];
            try_send_mwup();
            return;
        case kTerminate:
            terminate_seen_ = true;
            for (VertexId c : tau_children_) enqueue(c, {kTerminate});
            return;
        default:
            fail("unknown tag " + std::to_string(w[0]));
    }
}

}  // namespace cmst
