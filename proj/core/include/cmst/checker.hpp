#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cmst/graph.hpp"
#include "cmst/mst_protocol.hpp"
#include "cmst/oracle.hpp"
#include "cmst/sim.hpp"

namespace cmst {

/// God-mode observer: plugs into the engine's snapshot hook and validates
/// the structural invariants of every stage against the sequential oracle.
/// Violations are collected, not thrown, so a run can be reported whole.
class InvariantChecker {
public:
    InvariantChecker(const WeightedGraph& g, MstResult oracle, VertexId root);

    void observe(const SnapshotView& view);

    /// Call after the run to validate final state and close out counters.
    void finish();

    const std::vector<std::string>& violations() const { return violations_; }
    bool ok() const { return violations_.empty(); }

    int base_phases_checked() const { return last_completed_checked_ + 1; }
    int levels_checked() const { return last_level_checked_; }

private:
    void collect(const SnapshotView& view);
    void note(const std::string& v);
    void check_intervals();
    void check_premerge(int phase);
    void check_completed(int phase);
    void check_base_end();
    void check_level(int level);
    void check_pending_partition();
    void trace_packets(const SnapshotView& view);
    std::map<std::int64_t, std::vector<VertexId>> fragment_partition() const;

    const WeightedGraph& g_;
    MstResult oracle_;
    VertexId root_;
    std::vector<std::string> violations_;

    std::map<VertexId, const MstVertex*> vx_;
    bool intervals_checked_ = false;
    int last_premerge_checked_ = -1;
    int last_completed_checked_ = -1;
    bool base_end_checked_ = false;
    int last_level_checked_ = -1;
    std::int64_t prev_level_count_ = -1;
    // marks trail the adopt wave by a couple of rounds, so each level's
    // connectivity is validated at the next quiet boundary
    int pending_level_ = -1;
    std::map<std::int64_t, std::set<VertexId>> pending_partition_;

    // packet-trace state
    struct EdgeParse {
        bool dirend = false;
        int level = 0;
        std::map<std::pair<int, std::int64_t>, EdgeOrderKey> last_key;
    };
    std::map<std::pair<VertexId, VertexId>, EdgeParse> edge_state_;
};

}  // namespace cmst
