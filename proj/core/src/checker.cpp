#include "cmst/checker.hpp"

#include <algorithm>
#include <queue>

#include "cmst/wire.hpp"

namespace cmst {

using namespace wire;

InvariantChecker::InvariantChecker(const WeightedGraph& g, MstResult oracle,
                                   VertexId root)
    : g_(g), oracle_(std::move(oracle)), root_(root) {}

void InvariantChecker::note(const std::string& v) {
    if (violations_.size() < 64) violations_.push_back(v);
}

void InvariantChecker::collect(const SnapshotView& view) {
    if (!vx_.empty()) return;
    for (const auto& [id, proc] : *view.processes)
        vx_[id] = dynamic_cast<const MstVertex*>(proc);
}

void InvariantChecker::observe(const SnapshotView& view) {
    collect(view);
    trace_packets(view);

    if (!intervals_checked_) {
        bool all = std::all_of(vx_.begin(), vx_.end(),
                               [](const auto& p) { return p.second->intervals_ready(); });
        if (all) {
            check_intervals();
            intervals_checked_ = true;
        }
    }

    int pm = vx_.begin()->second->premerge_phase();
    if (pm > last_premerge_checked_ &&
        std::all_of(vx_.begin(), vx_.end(),
                    [&](const auto& p) { return p.second->premerge_phase() == pm; })) {
        check_premerge(pm);
        last_premerge_checked_ = pm;
    }

    int cp = vx_.begin()->second->completed_phase();
    if (cp > last_completed_checked_ &&
        std::all_of(vx_.begin(), vx_.end(),
                    [&](const auto& p) { return p.second->completed_phase() == cp; })) {
        check_completed(cp);
        last_completed_checked_ = cp;
    }

    if (!base_end_checked_ &&
        std::all_of(vx_.begin(), vx_.end(),
                    [](const auto& p) { return p.second->base_complete(); })) {
        check_base_end();
        base_end_checked_ = true;
    }

    if (base_end_checked_) {
        int lv = vx_.begin()->second->level();
        if (lv > last_level_checked_ &&
            std::all_of(vx_.begin(), vx_.end(),
                        [&](const auto& p) { return p.second->level() == lv; })) {
            check_level(lv);
            last_level_checked_ = lv;
        }
    }
}

void InvariantChecker::finish() {
    check_pending_partition();
    // final coarse structure was validated level by level; confirm the output
    // forest is oracle-identical at the edge level here as well
    std::set<EdgeOrderKey> marked;
    for (const auto& [id, v] : vx_)
        for (VertexId nb : v->mst_neighbors()) {
            Weight w = 0;
            for (const Neighbor& x : g_.neighbors(id))
                if (x.id == nb) w = x.w;
            marked.insert(edge_order_key(id, nb, w));
        }
    if (marked != oracle_.edges) note("[final] final marked edge set differs from oracle MST");
}

// ---------------------------------------------------------------------------

void InvariantChecker::check_intervals() {
    for (const auto& [id, v] : vx_) {
        std::int64_t span = v->interval_hi() - v->interval_lo() + 1;
        if (span != v->subtree_size())
            note("[intervals] interval size mismatch at " + std::to_string(id));
        if (v->tau_parent() >= 0) {
            const MstVertex* p = vx_.at(v->tau_parent());
            if (v->interval_lo() <= p->interval_lo() ||
                v->interval_hi() > p->interval_hi())
                note("[intervals] interval of " + std::to_string(id) +
                     " not nested in its parent's");
        }
        // children intervals are disjoint and cover [lo+1, hi]
        std::vector<std::pair<std::int64_t, std::int64_t>> kids;
        for (VertexId c : v->tau_children())
            kids.push_back({vx_.at(c)->interval_lo(), vx_.at(c)->interval_hi()});
        std::sort(kids.begin(), kids.end());
        std::int64_t cursor = v->interval_lo() + 1;
        for (auto [lo, hi] : kids) {
            if (lo != cursor) note("[intervals] interval gap/overlap under " + std::to_string(id));
            cursor = hi + 1;
        }
        if (cursor != v->interval_hi() + 1)
            note("[intervals] children intervals do not fill " + std::to_string(id));
    }
}

std::map<std::int64_t, std::vector<VertexId>> InvariantChecker::fragment_partition()
    const {
    std::map<std::int64_t, std::vector<VertexId>> frags;
    for (const auto& [id, v] : vx_) frags[v->frag_id()].push_back(id);
    return frags;
}

void InvariantChecker::check_premerge(int phase) {
    // ledger per small fragment, vertex -> fragment map
    std::map<VertexId, std::int64_t> frag_of;
    std::map<std::int64_t, PhaseLedger> led;
    for (const auto& [id, v] : vx_) {
        frag_of[id] = v->frag_id();
        // the pre-merge root wrote the ledger this round, possibly just
        // before flipping its parent pointer; key it by the ledger itself
        if (v->ledger().phase == phase) led[v->ledger().frag] = v->ledger();
    }
    if (led.empty()) return;  // base_done_early: nothing to validate

    // candidate forest edges: small fragment F -> parent fragment
    struct CEdge {
        std::int64_t child, parent;
    };
    std::vector<CEdge> edges;
    std::map<std::int64_t, std::int64_t> parent_of;
    for (const auto& [f, L] : led) {
        if (!L.small || !L.mwoe) continue;
        VertexId in = frag_of.at(L.mwoe->lo) == f ? L.mwoe->lo : L.mwoe->hi;
        VertexId out = in == L.mwoe->lo ? L.mwoe->hi : L.mwoe->lo;
        if (frag_of.at(in) != f) {
            note("[matching] phase " + std::to_string(phase) + ": MWOE of " +
                 std::to_string(f) + " has no endpoint inside");
            continue;
        }
        std::int64_t far = frag_of.at(out);
        const auto fit = led.find(far);
        bool far_small = fit != led.end() && fit->second.small;
        bool mutual = far_small && fit->second.mwoe && *fit->second.mwoe == *L.mwoe;
        bool croot_expected = !far_small || (mutual && f > far);
        if (L.candidate_root != croot_expected)
            note("[matching] phase " + std::to_string(phase) + ": candidate-root bit wrong at " +
                 std::to_string(f));
        if (!croot_expected) {
            edges.push_back({f, far});
            parent_of[f] = far;
        }
    }

    // acyclic
    for (const auto& [f, L] : led) {
        std::int64_t cur = f;
        std::set<std::int64_t> seen;
        while (parent_of.count(cur)) {
            if (!seen.insert(cur).second) {
                note("[matching] phase " + std::to_string(phase) + ": candidate graph cycle at " +
                     std::to_string(f));
                break;
            }
            cur = parent_of.at(cur);
        }
    }

    // proper 3-coloring over candidate edges
    for (const CEdge& e : edges) {
        const PhaseLedger& c = led.at(e.child);
        auto pit = led.find(e.parent);
        if (c.color < 0 || c.color > 2)
            note("[coloring] phase " + std::to_string(phase) + ": color out of palette at " +
                 std::to_string(e.child));
        if (pit != led.end() && pit->second.small && pit->second.color == c.color)
            note("[coloring] phase " + std::to_string(phase) + ": improper coloring on edge " +
                 std::to_string(e.child) + "-" + std::to_string(e.parent));
    }

    // matching: validity, maximality, no orphans
    std::map<std::int64_t, int> matched_as_child_count;
    for (const auto& [f, L] : led) {
        if (!L.matched_as_parent) continue;
        matched_as_child_count[L.matched_child] += 1;
        auto cit = led.find(L.matched_child);
        if (cit == led.end() || !cit->second.matched ||
            cit->second.matched_as_parent)
            note("[matching] phase " + std::to_string(phase) + ": match of " + std::to_string(f) +
                 " with " + std::to_string(L.matched_child) + " is inconsistent");
        if (!parent_of.count(L.matched_child) ||
            parent_of.at(L.matched_child) != f)
            note("[matching] phase " + std::to_string(phase) + ": matched pair " +
                 std::to_string(f) + "," + std::to_string(L.matched_child) +
                 " not a candidate edge");
    }
    for (const auto& [c, cnt] : matched_as_child_count)
        if (cnt > 1)
            note("[matching] phase " + std::to_string(phase) + ": fragment " + std::to_string(c) +
                 " matched twice");
    for (const CEdge& e : edges) {
        if (!led.at(e.child).matched && led.count(e.parent) &&
            led.at(e.parent).small && !led.at(e.parent).matched)
            note("[matching] phase " + std::to_string(phase) + ": matching not maximal on " +
                 std::to_string(e.child) + "-" + std::to_string(e.parent));
    }
    for (const auto& [f, L] : led) {
        if (!L.small || L.matched || !L.mwoe) continue;
        VertexId in = frag_of.at(L.mwoe->lo) == f ? L.mwoe->lo : L.mwoe->hi;
        VertexId out = in == L.mwoe->lo ? L.mwoe->hi : L.mwoe->lo;
        std::int64_t far = frag_of.at(out);
        auto fit = led.find(far);
        bool far_small = fit != led.end() && fit->second.small;
        bool far_matched = fit != led.end() && fit->second.matched;
        if (far_small && !far_matched)
            note("[matching] phase " + std::to_string(phase) + ": orphan unmatched fragment " +
                 std::to_string(f));
    }

    // CV iteration budget
    std::int64_t max_id = vx_.at(root_)->known_max_id();
    if (max_id > 0 &&
        cv_reduction_steps(max_id) > log_star2(max_id) + 6)
        note("[coloring] CV reduction steps exceed log* bound");
}

void InvariantChecker::check_completed(int phase) {
    // partition + tree structure + MST-subset
    std::map<std::int64_t, std::vector<VertexId>> frags;
    for (const auto& [id, v] : vx_) {
        frags[v->frag_id()].push_back(id);
        if (v->frag_parent() >= 0) {
            const MstVertex* p = vx_.at(v->frag_parent());
            if (p->frag_id() != v->frag_id())
                note("[forest] phase " + std::to_string(phase) + ": parent in different fragment at " +
                     std::to_string(id));
            if (!p->frag_children().count(id))
                note("[forest] phase " + std::to_string(phase) + ": parent/child mismatch at " +
                     std::to_string(id));
            Weight w = 0;
            bool edge_ok = false;
            for (const Neighbor& nb : g_.neighbors(id))
                if (nb.id == v->frag_parent()) {
                    w = nb.w;
                    edge_ok = true;
                }
            if (!edge_ok) {
                note("[forest] phase " + std::to_string(phase) + ": fragment edge not in graph");
            } else if (!oracle_.edges.count(edge_order_key(id, v->frag_parent(), w))) {
                note("[forest] phase " + std::to_string(phase) + ": fragment edge (" +
                     std::to_string(id) + "," + std::to_string(v->frag_parent()) +
                     ") not an MST edge");
            }
        } else if (v->frag_id() != id) {
            note("[forest] phase " + std::to_string(phase) + ": root identity mismatch at " +
                 std::to_string(id));
        }
    }

    std::int64_t n = static_cast<std::int64_t>(g_.n());
    std::int64_t cnt = static_cast<std::int64_t>(frags.size());
    if (cnt * (std::int64_t{1} << phase) > n)
        note("[forest] phase " + std::to_string(phase) + ": fragment count " +
             std::to_string(cnt) + " exceeds n/2^i");

    // per-fragment exact tree diameter and size bounds
    std::int64_t k = vx_.at(root_)->chosen_k();
    std::int64_t t = 0;
    while ((std::int64_t{1} << t) < k) ++t;
    for (const auto& [f, members] : frags) {
        // BFS over fragment tree edges
        std::map<VertexId, std::vector<VertexId>> adj;
        for (VertexId m : members) {
            const MstVertex* v = vx_.at(m);
            if (v->frag_parent() >= 0) {
                adj[m].push_back(v->frag_parent());
                adj[v->frag_parent()].push_back(m);
            }
        }
        auto bfs_far = [&](VertexId s) {
            std::map<VertexId, std::int64_t> dist;
            dist[s] = 0;
            std::queue<VertexId> q;
            q.push(s);
            VertexId far = s;
            while (!q.empty()) {
                VertexId u = q.front();
                q.pop();
                for (VertexId x : adj[u])
                    if (!dist.count(x)) {
                        dist[x] = dist[u] + 1;
                        if (dist[x] > dist[far]) far = x;
                        q.push(x);
                    }
            }
            if (dist.size() != members.size())
                note("[forest] phase " + std::to_string(phase) + ": fragment " +
                     std::to_string(f) + " tree is disconnected");
            return std::pair{far, dist[far]};
        };
        auto [far, _] = bfs_far(members.front());
        auto [far2, diam] = bfs_far(far);
        (void)far2;
        if (diam > std::int64_t{6} << (phase + 1))
            note("[forest] phase " + std::to_string(phase) + ": fragment " + std::to_string(f) +
                 " diameter " + std::to_string(diam) + " exceeds 6*2^(i+1)");
        if (phase <= t - 2 &&
            static_cast<std::int64_t>(members.size()) < (std::int64_t{1} << phase))
            note("[forest] phase " + std::to_string(phase) + ": fragment " + std::to_string(f) +
                 " smaller than 2^i");
    }
}

void InvariantChecker::check_base_end() {
    std::int64_t n = static_cast<std::int64_t>(g_.n());
    std::int64_t k = vx_.at(root_)->chosen_k();
    auto frags = fragment_partition();
    std::int64_t cnt = static_cast<std::int64_t>(frags.size());
    // the (2n/k, 12k) contract presumes k <= n; overrides beyond that leave
    // only the trivial guarantees
    if (k <= n && cnt * k > 2 * n)
        note("[forest] base forest has " + std::to_string(cnt) + " fragments > 2n/k");
    for (const auto& [f, members] : frags) {
        // diameter bound 12k, via double BFS on tree edges
        std::map<VertexId, std::vector<VertexId>> adj;
        for (VertexId m : members) {
            const MstVertex* v = vx_.at(m);
            if (v->frag_parent() >= 0) {
                adj[m].push_back(v->frag_parent());
                adj[v->frag_parent()].push_back(m);
            }
        }
        auto far_from = [&](VertexId s) {
            std::map<VertexId, std::int64_t> dist;
            dist[s] = 0;
            std::queue<VertexId> q;
            q.push(s);
            std::pair<VertexId, std::int64_t> far{s, 0};
            while (!q.empty()) {
                VertexId u = q.front();
                q.pop();
                for (VertexId x : adj[u])
                    if (!dist.count(x)) {
                        dist[x] = dist[u] + 1;
                        if (dist[x] > far.second) far = {x, dist[x]};
                        q.push(x);
                    }
            }
            return far;
        };
        auto a = far_from(members.front());
        auto b = far_from(a.first);
        if (b.second > 12 * k)
            note("[forest] base fragment " + std::to_string(f) + " diameter " +
                 std::to_string(b.second) + " exceeds 12k");
    }
    prev_level_count_ = cnt;
}

void InvariantChecker::check_level(int level) {
    check_pending_partition();

    std::map<std::int64_t, std::set<VertexId>> coarse;
    std::set<EdgeOrderKey> marked;
    for (const auto& [id, v] : vx_) {
        coarse[v->cur_frag()].insert(id);
        for (VertexId nb : v->mst_neighbors()) {
            Weight w = 0;
            for (const Neighbor& x : g_.neighbors(id))
                if (x.id == nb) w = x.w;
            marked.insert(edge_order_key(id, nb, w));
        }
    }
    for (const EdgeOrderKey& e : marked)
        if (!oracle_.edges.count(e))
            note("[forest] level " + std::to_string(level) + ": marked edge not in oracle MST");

    std::int64_t cnt = static_cast<std::int64_t>(coarse.size());
    // level 0 is the base state itself; halving applies to each merge after it
    if (level > 0 && prev_level_count_ > 1 && cnt > prev_level_count_ / 2)
        note("[halving] level " + std::to_string(level) + ": count " + std::to_string(cnt) +
             " not halved from " + std::to_string(prev_level_count_));
    prev_level_count_ = cnt;

    pending_level_ = level;
    pending_partition_ = std::move(coarse);
}

void InvariantChecker::check_pending_partition() {
    if (pending_level_ < 0) return;
    std::set<EdgeOrderKey> marked;
    for (const auto& [id, v] : vx_)
        for (VertexId nb : v->mst_neighbors()) {
            Weight w = 0;
            for (const Neighbor& x : g_.neighbors(id))
                if (x.id == nb) w = x.w;
            marked.insert(edge_order_key(id, nb, w));
        }
    std::map<VertexId, std::vector<VertexId>> madj;
    for (const EdgeOrderKey& e : marked) {
        madj[e.lo].push_back(e.hi);
        madj[e.hi].push_back(e.lo);
    }
    for (const auto& [f, members] : pending_partition_) {
        std::set<VertexId> seen;
        std::queue<VertexId> q;
        q.push(*members.begin());
        seen.insert(*members.begin());
        while (!q.empty()) {
            VertexId u = q.front();
            q.pop();
            for (VertexId x : madj[u])
                if (members.count(x) && seen.insert(x).second) q.push(x);
        }
        if (seen.size() != members.size())
            note("[forest] level " + std::to_string(pending_level_) +
                 ": coarse fragment " + std::to_string(f) +
                 " not connected by marked edges");
    }
    pending_level_ = -1;
    pending_partition_.clear();
}

void InvariantChecker::trace_packets(const SnapshotView& view) {
    for (const RoundPacket& p : *view.delivered) {
        auto& st = edge_state_[{p.src, p.dst}];
        const auto& w = p.payload;
        std::size_t i = 0;
        if (!w.empty() && w[0] >= 0) {
            int stride = st.dirend ? 5 : 2;
            while (i < w.size() && w[i] >= 0) {
                if (stride == 5) {
                    // candidate record: enforce the strictly-lighter filter rule
                    EdgeOrderKey key{w[i + 2], w[i + 3], w[i + 4]};
                    auto lk = st.last_key.find({st.level, w[i]});
                    if (lk != st.last_key.end() && !(key < lk->second))
                        note("[filter] filter violation on edge " + std::to_string(p.src) +
                             "->" + std::to_string(p.dst));
                    st.last_key[{st.level, w[i]}] = key;
                }
                i += static_cast<std::size_t>(stride);
            }
        }
        while (i < w.size()) {
            int a = wire::arity(w[i]);
            if (a == 0 || i + static_cast<std::size_t>(a) > w.size()) {
                note("[routing] unparseable packet " + std::to_string(p.src) + "->" +
                     std::to_string(p.dst));
                break;
            }
            if (w[i] == kDirEnd) st.dirend = true;
            if (w[i] == kUpEnd) st.level += 1;
            if (w[i] == kDownAdopt || w[i] == kDownWinner) {
                // exact-path routing: every hop goes parent -> child with the
                // child's interval containing the target
                std::int64_t lo = w[i + 1];
                const MstVertex* dst = vx_.at(p.dst);
                if (dst->tau_parent() != p.src)
                    note("[routing] downcast hop " + std::to_string(p.src) + "->" +
                         std::to_string(p.dst) + " is not a parent->child tau edge");
                if (!(dst->interval_lo() <= lo && lo <= dst->interval_hi()))
                    note("[routing] downcast record for " + std::to_string(lo) +
                         " routed outside its interval");
            }
            i += static_cast<std::size_t>(a);
        }
    }
}

}  // namespace cmst
