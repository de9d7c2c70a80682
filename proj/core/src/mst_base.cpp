#include <algorithm>

#include "cmst/mst_protocol.hpp"
#include "cmst/wire.hpp"

// The base-forest phases run in lockstep on a schedule every vertex derives
// from the GO broadcast, so cross-fragment steps (the simultaneous MWOE
// announce, the color steps, the three matching steps) need no extra
// coordination. Window lengths are sized by the per-phase diameter bound
// the merging scheme maintains.
//
// Phase windows, in order:
//   diam    convergecast of subtree heights; root learns the exact diameter
//   part    participation broadcast (diameter <= 2^i), then small-flags to
//           all graph neighbors in the last round
//   mwoe    convergecast of the minimum crossing EdgeOrderKey
//   chosen  chosen-edge broadcast; owners announce over the MWOE in the
//           last round (mutual announces cross simultaneously)
//   croot   the owner reports whether the fragment is a candidate-forest root
//   colors  palette steps: color reduction, then shift-down/eliminate pairs
//   match   3 color-class steps of (census, select+notify, confirm)
//   reroot  re-root route along the MWOE path; attach in the last round
//   newid   merged-fragment identity flood
//   fid     every vertex updates all neighbors with its fragment identity

namespace cmst {

using namespace wire;

namespace {

std::int64_t small_palette_excluding(std::int64_t a, std::int64_t b = -1) {
    for (std::int64_t c = 0; c < 3; ++c)
        if (c != a && c != b) return c;
    return 0;  // unreachable
}

}  // namespace

void MstVertex::base_step(std::int64_t offset) {
    if (sched_.phases == 0) {
        // no phases: the single round seeds neighbor fragment identities
        window_fid();
        return;
    }
    int phase = 0;
    while (phase + 1 < sched_.phases &&
           offset >= sched_.window[phase].start + sched_.window[phase].end)
        ++phase;
    const PhaseWindows& w = sched_.window[phase];
    std::int64_t o = offset - w.start;

    if (o == 0) begin_phase(phase);

    if (o >= w.fid)
        window_fid();
    else if (o >= w.newid)
        ;  // flood is handler-driven
    else if (o >= w.reroot)
        window_reroot(w, o - w.reroot);
    else if (o >= w.match)
        window_match(w, o - w.match);
    else if (o >= w.colors)
        window_colors(w, o - w.colors);
    else if (o >= w.croot)
        window_croot(w, o - w.croot);
    else if (o >= w.chosen)
        window_chosen(w, o - w.chosen);
    else if (o >= w.mwoe)
        window_mwoe(w, o - w.mwoe);
    else if (o >= w.part)
        window_part(w, o - w.part);
    else
        window_diam(w, o);
}

void MstVertex::begin_phase(int i) {
    ph_ = PhaseState{};
    ph_.phase = i;
    if (is_root_) stage_ = "base_forest_phase_" + std::to_string(i);
}

// ---- diam ------------------------------------------------------------------

void MstVertex::window_diam(const PhaseWindows&, std::int64_t o) {
    if (o == 0) try_send_diam();
}

void MstVertex::try_send_diam() {
    if (ph_.phase < 0 || ph_.diam_sent) return;
    if (ph_.diam_reports < frag_children_.size()) return;
    std::int64_t height = ph_.h1 < 0 ? 0 : ph_.h1 + 1;
    std::int64_t via_me = 0;
    if (ph_.h1 >= 0) via_me = ph_.h2 >= 0 ? ph_.h1 + ph_.h2 + 2 : ph_.h1 + 1;
    std::int64_t through = std::max(ph_.through, via_me);
    ph_.diam_sent = true;
    if (frag_parent_ >= 0)
        enqueue(frag_parent_, {kDiam, height, through});
    else
        ph_.diameter = through;
}

// ---- part ------------------------------------------------------------------

void MstVertex::window_part(const PhaseWindows& w, std::int64_t o) {
    if (o == 0 && frag_parent_ < 0) {
        ph_.small = ph_.diameter <= (std::int64_t{1} << ph_.phase);
        ph_.small_known = true;
        if (!ph_.small) ph_.id_final = true;
        for (VertexId c : frag_children_)
            enqueue(c, {kParticipate, ph_.small ? 1 : 0});
    }
    if (o == w.h + 1) {
        if (!ph_.small_known) fail("participation broadcast missed");
        for (const Neighbor& nb : nbrs_)
            enqueue(nb.id, {kSmallFlag, ph_.small ? 1 : 0});
    }
}

// ---- mwoe ------------------------------------------------------------------

void MstVertex::window_mwoe(const PhaseWindows&, std::int64_t o) {
    if (o == 0) try_send_mwoe();
}

void MstVertex::try_send_mwoe() {
    if (ph_.phase < 0 || !ph_.small_known || !ph_.small || ph_.mwoe_sent) return;
    if (ph_.mwoe_reports < frag_children_.size()) return;
    for (const Neighbor& nb : nbrs_) {
        if (nbr_frag_.at(nb.id) == frag_id_) continue;
        EdgeOrderKey key = edge_order_key(id_, nb.id, nb.w);
        if (!ph_.best || key < *ph_.best) {
            ph_.best = key;
            ph_.best_via = -1;
            ph_.own_mwoe_nbr = nb.id;
        }
    }
    ph_.mwoe_sent = true;
    if (frag_parent_ >= 0) {
        if (ph_.best)
            enqueue(frag_parent_, {kMwoe, ph_.best->w, ph_.best->lo, ph_.best->hi});
        else
            enqueue(frag_parent_, {kMwoeNone});
    }
}

// ---- chosen ----------------------------------------------------------------

void MstVertex::window_chosen(const PhaseWindows& w, std::int64_t o) {
    if (o == 0 && frag_parent_ < 0 && ph_.small) {
        if (!ph_.best) {
            // no outgoing edge: this fragment spans the whole graph
            base_done_early_ = true;
            for (VertexId c : frag_children_) enqueue(c, {kBaseDone});
            return;
        }
        ph_.frag_mwoe = ph_.best;
        if (id_ == ph_.best->lo || id_ == ph_.best->hi) {
            ph_.i_am_owner = true;
            ph_.cross_nbr = id_ == ph_.best->lo ? ph_.best->hi : ph_.best->lo;
        }
        for (VertexId c : frag_children_)
            enqueue(c, {kChosen, ph_.best->w, ph_.best->lo, ph_.best->hi});
    }
    if (o == w.h + 1 && ph_.i_am_owner) enqueue(ph_.cross_nbr, {kAnnounce});
}

// ---- croot -----------------------------------------------------------------

void MstVertex::window_croot(const PhaseWindows&, std::int64_t o) {
    if (o != 0 || !ph_.i_am_owner) return;
    bool croot;
    if (ph_.ann_from_cross)
        croot = frag_id_ > nbr_frag_.at(ph_.cross_nbr);
    else
        croot = !nbr_small_.at(ph_.cross_nbr);
    if (frag_parent_ < 0)
        ph_.candidate_root = croot;
    else
        enqueue(frag_parent_, {kCandRoot, croot ? 1 : 0});
}

// ---- colors ----------------------------------------------------------------

void MstVertex::window_colors(const PhaseWindows& w, std::int64_t o) {
    if (frag_parent_ >= 0 || !ph_.small) return;  // fragment roots drive this
    int s = static_cast<int>(o / w.color_step_len);
    std::int64_t so = o % w.color_step_len;
    if (so == 0) {
        if (ph_.colors.empty()) ph_.colors.push_back(frag_id_);
        std::int64_t col = ph_.colors[static_cast<std::size_t>(s)];
        for (VertexId c : frag_children_) enqueue(c, {kColorDown, s, col});
        for (const ForeignChild& fc : ph_.foreign)
            enqueue(fc.nbr, {kColorCross, s, col});
    }
    if (so == w.color_step_len - 1) root_compute_next_color(s);
}

void MstVertex::root_compute_next_color(int s) {
    auto& cs = ph_.colors;
    std::int64_t cur = cs[static_cast<std::size_t>(s)];
    std::int64_t next;
    auto parent_color = [&]() {
        auto it = ph_.parent_color.find(s);
        if (it == ph_.parent_color.end()) fail("missing parent color at step " + std::to_string(s));
        return it->second;
    };
    switch (palette_step_kind(s, sched_.palette_steps - 6)) {
        case PaletteStep::Reduce:
            next = ph_.candidate_root ? cv_root_color(cur)
                                      : cv_child_color(cur, parent_color());
            break;
        case PaletteStep::ShiftDown:
            next = ph_.candidate_root ? small_palette_excluding(cur) : parent_color();
            break;
        case PaletteStep::Eliminate: {
            int target = palette_eliminate_target(s, sched_.palette_steps - 6);
            if (cur != target) {
                next = cur;
            } else {
                std::int64_t children_color = cs[static_cast<std::size_t>(s) - 1];
                next = ph_.candidate_root
                           ? small_palette_excluding(children_color)
                           : small_palette_excluding(parent_color(), children_color);
            }
            break;
        }
    }
    cs.push_back(next);
}

// ---- match -----------------------------------------------------------------

void MstVertex::window_match(const PhaseWindows& w, std::int64_t o) {
    if (!ph_.small) return;
    int c = static_cast<int>(o / (3 * w.match_step_len));
    std::int64_t inner = o % (3 * w.match_step_len);
    int sub = static_cast<int>(inner / w.match_step_len);
    std::int64_t so = inner % w.match_step_len;

    if (sub == 0 && so == 0) {
        ph_.mm_step = c;
        ph_.cen_reports = 0;
        ph_.cen_min.reset();
        ph_.cen_via = -1;
        ph_.cen_sent = false;
        try_send_census();
    }
    if (sub == 1 && so == 0 && frag_parent_ < 0) {
        // fragments of this color class pick an unmatched child
        if (ph_.matched || ph_.colors.empty()) return;
        if (ph_.colors.back() != c) return;
        if (!ph_.cen_min) return;
        ph_.matched = true;
        ph_.matched_as_parent = true;
        ph_.matched_child = *ph_.cen_min;
        if (ph_.cen_via >= 0) {
            enqueue(ph_.cen_via, {kSelect, *ph_.cen_min});
        } else {
            bool found = false;
            for (ForeignChild& fc : ph_.foreign)
                if (fc.frag == *ph_.cen_min) {
                    fc.matched = true;
                    enqueue(fc.nbr, {kSelectCross});
                    found = true;
                    break;
                }
            if (!found) fail("census minimum not held at root");
        }
        // tell the fragment this one hangs from that it is now matched
        if (!ph_.candidate_root) {
            if (ph_.best_via < 0)
                enqueue(ph_.cross_nbr, {kIMatchedCross});
            else
                enqueue(ph_.best_via, {kIMatched});
        }
    }
}

void MstVertex::try_send_census() {
    if (ph_.mm_step < 0 || ph_.cen_sent) return;
    if (ph_.cen_reports < frag_children_.size()) return;
    for (const ForeignChild& fc : ph_.foreign) {
        if (fc.matched) continue;
        if (!ph_.cen_min || fc.frag < *ph_.cen_min) {
            ph_.cen_min = fc.frag;
            ph_.cen_via = -1;
        }
    }
    ph_.cen_sent = true;
    if (frag_parent_ >= 0) {
        if (ph_.cen_min)
            enqueue(frag_parent_, {kCensus, *ph_.cen_min});
        else
            enqueue(frag_parent_, {kCensusNone});
    }
}

// ---- reroot + attach ---------------------------------------------------------

void MstVertex::window_reroot(const PhaseWindows& w, std::int64_t o) {
    if (o == 0) {
        premerge_phase_ = ph_.phase;
        if (frag_parent_ < 0) {
            ledger_ = PhaseLedger{};
            ledger_.phase = ph_.phase;
            ledger_.frag = frag_id_;
            ledger_.diameter = ph_.diameter;
            ledger_.small = ph_.small;
            ledger_.mwoe = ph_.frag_mwoe;
            ledger_.candidate_root = ph_.candidate_root;
            ledger_.color = ph_.colors.empty() ? -1 : ph_.colors.back();
            ledger_.matched = ph_.matched;
            ledger_.matched_as_parent = ph_.matched_as_parent;
            ledger_.matched_child = ph_.matched_child;

            if (!ph_.small) return;
            if (ph_.matched_as_parent) {
                ph_.id_final = true;
                for (VertexId c : frag_children_) enqueue(c, {kKeepRoot});
            } else {
                // matched-as-child and unmatched fragments both merge along
                // their own MWOE
                ph_.rerooting = true;
                if (ph_.best_via < 0) {
                    frag_parent_ = ph_.cross_nbr;
                    ph_.attach_due = true;
                } else {
                    frag_children_.erase(ph_.best_via);
                    VertexId via = ph_.best_via;
                    frag_parent_ = via;
                    enqueue(via, {kReroot});
                }
            }
        }
    }
    if (o == w.h + 1 && ph_.attach_due) {
        mst_nbrs_.insert(frag_parent_);
        enqueue(frag_parent_, {kAttach});
    }
}

// ---- fid ---------------------------------------------------------------------

void MstVertex::window_fid() {
    if (!base_done_early_)
        for (const Neighbor& nb : nbrs_) enqueue(nb.id, {kFragId, frag_id_});
    completed_phase_ = sched_.phases == 0 ? 0 : ph_.phase;
}

}  // namespace cmst
