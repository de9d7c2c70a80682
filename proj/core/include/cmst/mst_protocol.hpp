#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmst/graph.hpp"
#include "cmst/sim.hpp"

namespace cmst {

// ---------------------------------------------------------------------------
// Pure pieces of the protocol, unit-testable in isolation.
// ---------------------------------------------------------------------------

/// Iterated log base 2: applications of log2 until the value drops to <= 1.
int log_star2(std::int64_t x);

/// Regime selection. Threshold s = ceil(sqrt(n/b)); the BFS-root eccentricity
/// stands in for the hop diameter (D/2 <= ecc <= D). Small regime: k = s;
/// large regime: k = ecc.
std::int64_t select_k(std::int64_t n, std::int64_t b, std::int64_t ecc);

/// Number of color-reduction steps that provably lands every color in
/// {0..5} when initial colors are at most max_color, identical at every
/// vertex; bounded by log*2(max_color) + 6.
int cv_reduction_steps(std::int64_t max_color);

/// One color-reduction step for a non-root node: <lowest differing bit
/// index, own bit at it>, encoded as 2*index + bit.
std::int64_t cv_child_color(std::int64_t own, std::int64_t parent);

/// Root rule: <0, own low bit>, i.e. the low bit itself. Children that
/// differ from the root at bit 0 recolor to the complement, so this never
/// collides with them.
std::int64_t cv_root_color(std::int64_t own);

/// Schedule for one color-palette step s in [0, cv_steps+6): the first
/// cv_steps entries are reductions, then shift-down/eliminate pairs for
/// colors 5, 4, 3.
enum class PaletteStep { Reduce, ShiftDown, Eliminate };
PaletteStep palette_step_kind(int s, int cv_steps);
/// Color being eliminated at an Eliminate step.
int palette_eliminate_target(int s, int cv_steps);

/// Pure routing rule: the unique child interval containing target_lo.
/// Returns -1 when none does (a broken interval assignment).
VertexId interval_next_hop(const std::vector<std::pair<VertexId, std::pair<std::int64_t, std::int64_t>>>& child_intervals,
                           std::int64_t target_lo);

// ---------------------------------------------------------------------------
// Round schedule of the base-forest phases.
// ---------------------------------------------------------------------------

/// All vertices derive the same schedule from (k, n, max_id) broadcast once,
/// so the phases run in lockstep without any further coordination. H bounds
/// the fragment height at each phase, and every window is
/// sized for the worst case.
struct PhaseWindows {
    std::int64_t h = 0;       // height bound for this phase
    std::int64_t start = 0;   // offset of the phase within the base era
    std::int64_t diam = 0;    // convergecast of heights/diameter
    std::int64_t part = 0;    // participation broadcast + neighbor small-flags
    std::int64_t mwoe = 0;    // MWOE convergecast
    std::int64_t chosen = 0;  // chosen-edge broadcast + cross announce
    std::int64_t croot = 0;   // candidate-root bit upcast
    std::int64_t colors = 0;  // palette steps
    std::int64_t match = 0;   // 3 matching steps
    std::int64_t reroot = 0;  // re-root routes + attach
    std::int64_t newid = 0;   // merged-fragment id flood
    std::int64_t fid = 0;     // neighbor update round
    std::int64_t end = 0;     // offset one past the phase
    std::int64_t color_step_len = 0;
    std::int64_t match_step_len = 0;
};

struct BaseSchedule {
    int phases = 0;           // t = ceil(log2 k)
    int palette_steps = 0;    // cv_reduction_steps(max_id) + 6
    std::int64_t total = 0;   // rounds of the whole base era
    std::vector<PhaseWindows> window;

    static BaseSchedule build(std::int64_t k, std::int64_t n, std::int64_t max_id);
};

// ---------------------------------------------------------------------------
// The per-vertex protocol.
// ---------------------------------------------------------------------------

struct MstConfig {
    VertexId root = -1;  // BFS root; callers default it to the min vertex id
    int bandwidth = 1;   // b
    int words_per_unit = kWordsPerUnit;
    std::optional<std::int64_t> k_override;
};

/// Candidate crossing edge of a coarse fragment, as pipelined toward rt.
struct CandidateRecord {
    std::int64_t coarse = -1;  // reporting coarse fragment
    std::int64_t far = -1;     // coarse fragment on the other side
    EdgeOrderKey key;          // (w, lo, hi); lo/hi are the endpoints

    bool better_than(const std::optional<CandidateRecord>& o) const {
        return !o || key < o->key;
    }
};

/// Per-fragment ledger of one base-forest phase, filled in at the fragment
/// root and read by the god-mode checker at phase boundaries.
struct PhaseLedger {
    int phase = -1;
    std::int64_t frag = -1;
    std::int64_t diameter = -1;
    bool small = false;
    std::optional<EdgeOrderKey> mwoe;
    bool candidate_root = false;
    std::int64_t color = -1;  // final palette color
    bool matched = false;
    bool matched_as_parent = false;
    std::int64_t matched_child = -1;
};

class MstVertex : public VertexProcess {
public:
    MstVertex(VertexId id, const std::vector<Neighbor>& neighbors,
              const MstConfig& cfg);

    StepResult step(std::int64_t round,
                    std::span<const RoundPacket> inbox) override;

    // -- observation surface (god-mode checker, harness) --------------------
    VertexId id() const { return id_; }
    VertexId tau_parent() const { return tau_parent_; }
    const std::set<VertexId>& tau_children() const { return tau_children_; }
    std::int64_t depth() const { return depth_; }
    std::int64_t interval_lo() const { return ilo_; }
    std::int64_t interval_hi() const { return ihi_; }
    std::int64_t subtree_size() const { return subtree_size_; }
    bool intervals_ready() const { return ilo_ >= 1; }

    std::int64_t known_n() const { return n_; }
    std::int64_t known_max_id() const { return max_id_; }
    std::int64_t known_ecc() const { return ecc_; }
    std::int64_t chosen_k() const { return k_; }

    std::int64_t frag_id() const { return frag_id_; }
    VertexId frag_parent() const { return frag_parent_; }
    const std::set<VertexId>& frag_children() const { return frag_children_; }
    bool base_done_early() const { return base_done_early_; }
    bool base_complete() const { return base_complete_; }

    /// Checker markers: set in lockstep by the round schedule.
    int premerge_phase() const { return premerge_phase_; }
    int completed_phase() const { return completed_phase_; }
    const PhaseLedger& ledger() const { return ledger_; }
    bool is_frag_root() const { return frag_parent_ < 0; }

    std::int64_t cur_frag() const { return cur_frag_; }
    int level() const { return level_; }
    bool halted() const { return halted_; }
    /// Root only: base fragments learned through the directory upcast.
    std::int64_t base_fragment_count() const {
        return static_cast<std::int64_t>(rt_directory_.size());
    }

    /// Output: incident MST edges as (neighbor id, weight), sorted.
    std::vector<Neighbor> mst_edges() const;
    const std::set<VertexId>& mst_neighbors() const { return mst_nbrs_; }

private:
    // ---- plumbing ----------------------------------------------------------
    struct OutItem {
        // Pair: tag-free directory pair; Capped: tagged downcast record,
        // at most b per packet.
        enum Kind { Tagged, Pair, Capped } kind = Tagged;
        std::vector<Word> words;
    };

    void enqueue(VertexId dst, std::vector<Word> words);
    void enqueue_capped(VertexId dst, std::vector<Word> words);
    void enqueue_pair(VertexId dst, Word a, Word b);
    void pump_outqueues();
    bool is_neighbor(VertexId v) const;
    Weight weight_to(VertexId v) const;
    [[noreturn]] void fail(const std::string& what) const;

    void handle_packet(const RoundPacket& p);
    void handle_tagged(VertexId src, const Word* w, int len);

    // ---- tau era -----------------------------------------------------------
    void start_round_one();
    void on_join(VertexId src, std::int64_t sender_depth);
    void pump_tau();
    void root_finish_sizes();
    void assign_child_intervals(std::int64_t lo, std::int64_t hi);
    void on_go(std::int64_t max_id, std::int64_t ecc, std::int64_t k, std::int64_t n);

    // ---- base forest era ---------------------------------------------------
    void base_step(std::int64_t offset);
    void begin_phase(int i);
    void window_diam(const PhaseWindows& w, std::int64_t o);
    void window_part(const PhaseWindows& w, std::int64_t o);
    void window_mwoe(const PhaseWindows& w, std::int64_t o);
    void window_chosen(const PhaseWindows& w, std::int64_t o);
    void window_croot(const PhaseWindows& w, std::int64_t o);
    void window_colors(const PhaseWindows& w, std::int64_t o);
    void window_match(const PhaseWindows& w, std::int64_t o);
    void window_reroot(const PhaseWindows& w, std::int64_t o);
    void window_fid();
    void try_send_diam();
    void try_send_mwoe();
    void try_send_census();
    void root_compute_next_color(int s);
    void begin_levels_era();

    // ---- directory + levels era --------------------------------------------
    void pump_directory();
    void pump_levels();
    void try_send_mwup();
    void filter_insert(int level, const CandidateRecord& rec);
    void try_send_records_end();
    void rt_check_directory_done();
    void rt_root_merge();
    void route_down(std::vector<Word> rec);
    void consume_downcast(const Word* w, int len);
    void apply_adopt(std::int64_t new_id, bool final);
    void apply_winner(Weight w, VertexId a, VertexId b);
    void rt_maybe_terminate();

    // ---- static ------------------------------------------------------------
    VertexId id_;
    std::vector<Neighbor> nbrs_;  // sorted by id
    MstConfig cfg_;
    std::int64_t budget_;  // B = b * words_per_unit
    bool is_root_;

    // round bookkeeping
    std::int64_t round_ = 0;
    std::map<VertexId, std::deque<OutItem>> outq_;
    std::vector<RoundPacket> outbox_;
    std::optional<std::string> stage_;
    bool halted_ = false;
    bool terminate_seen_ = false;

    // ---- tau tree ----------------------------------------------------------
    bool joined_ = false;
    bool bfs_done_ = false;
    std::int64_t depth_ = -1;
    VertexId tau_parent_ = -1;
    std::set<VertexId> tau_children_;
    int joins_sent_ = 0;
    int responses_ = 0;
    std::vector<std::pair<VertexId, std::int64_t>> pending_joins_;
    std::int64_t go_round_ = -1;
    // sizes convergecast accumulators
    std::int64_t subtree_size_ = 1;
    std::int64_t subtree_max_id_;
    std::int64_t subtree_max_depth_ = 0;
    std::size_t size_reports_ = 0;
    bool size_sent_ = false;
    std::map<VertexId, std::int64_t> child_size_;
    // intervals
    std::int64_t ilo_ = -1, ihi_ = -1;
    std::map<VertexId, std::pair<std::int64_t, std::int64_t>> child_itv_;

    // ---- globals (post GO) --------------------------------------------------
    std::int64_t n_ = -1, max_id_ = -1, ecc_ = -1, k_ = -1;
    std::int64_t base_start_ = -1, base_end_ = -1;
    BaseSchedule sched_;

    // ---- base forest --------------------------------------------------------
    std::int64_t frag_id_;
    VertexId frag_parent_ = -1;
    std::set<VertexId> frag_children_;
    std::map<VertexId, std::int64_t> nbr_frag_;
    std::map<VertexId, bool> nbr_small_;
    bool base_done_early_ = false;
    bool base_complete_ = false;
    int premerge_phase_ = -1;
    int completed_phase_ = -1;
    PhaseLedger ledger_;

    struct ForeignChild {
        std::int64_t frag = -1;
        VertexId nbr = -1;
        bool matched = false;
    };

    struct PhaseState {
        int phase = -1;
        // diameter convergecast
        std::size_t diam_reports = 0;
        std::int64_t h1 = -1, h2 = -1;  // two largest child heights
        std::int64_t through = 0;
        bool diam_sent = false;
        std::int64_t diameter = -1;  // root only
        // participation
        bool small = false, small_known = false;
        // MWOE convergecast
        std::size_t mwoe_reports = 0;
        std::optional<EdgeOrderKey> best;
        VertexId best_via = -1;  // child that supplied best; -1 = own edge
        VertexId own_mwoe_nbr = -1;
        bool mwoe_sent = false;
        // chosen broadcast
        std::optional<EdgeOrderKey> frag_mwoe;
        bool i_am_owner = false;
        VertexId cross_nbr = -1;
        // announce results
        std::vector<ForeignChild> foreign;
        bool ann_from_cross = false;
        bool candidate_root = false;
        // colors (fragment root)
        std::vector<std::int64_t> colors;
        std::map<int, std::int64_t> parent_color;  // step -> received color
        // matching
        int mm_step = -1;
        std::size_t cen_reports = 0;
        std::optional<std::int64_t> cen_min;
        VertexId cen_via = -1;  // -1 = one of my own foreign children
        bool cen_sent = false;
        bool matched = false;
        bool matched_as_parent = false;
        std::int64_t matched_child = -1;
        // merge
        bool rerooting = false;   // my fragment re-roots (set where known)
        bool attach_due = false;  // I own the merge edge and must attach
        bool id_final = false;
        std::vector<VertexId> attach_pending;
    };
    PhaseState ph_;

    // ---- directory + levels -------------------------------------------------
    bool dir_end_sent_ = false;
    std::size_t dir_child_ends_ = 0;
    std::deque<std::pair<Word, Word>> dir_out_;
    bool level0_enabled_ = false;

    std::int64_t cur_frag_ = -1;
    int level_ = 0;
    bool final_level_ = false;
    std::map<VertexId, int> nbr_cur_version_;
    std::map<VertexId, std::int64_t> nbr_cur_;

    struct FragLevel {
        std::size_t reports = 0;
        std::optional<CandidateRecord> best;
        bool sent = false;  // forwarded to frag parent / injected at root
    };
    FragLevel fl_;

    struct TauLevel {
        std::map<std::int64_t, CandidateRecord> best;    // filter state
        std::map<std::int64_t, CandidateRecord> queued;  // unsent improvements
        std::map<std::int64_t, EdgeOrderKey> last_sent;
        std::size_t child_ends = 0;
        bool end_sent = false;
    };
    std::map<int, TauLevel> tau_;
    int tau_front_ = 0;                    // level whose records may be sent
    std::map<VertexId, int> recv_level_;   // per tau child: #kUpEnd received
    std::map<VertexId, bool> dirend_recv_;

    std::map<VertexId, std::deque<std::vector<Word>>> downq_;

    // rt-only state
    std::map<std::int64_t, std::int64_t> rt_directory_;       // base id -> lo
    std::map<std::int64_t, std::int64_t> rt_base_to_coarse_;  // base id -> coarse
    std::int64_t rt_fcount_ = -1;                             // |F_j|
    int rt_level_ = 0;
    std::map<std::int64_t, CandidateRecord> rt_chosen_;  // old coarse -> winner
    bool rt_terminating_ = false;
    std::int64_t rt_terminate_round_ = -1;
    bool rt_downcast_active_ = false;
    int rt_pending_stage_level_ = -1;

    // ---- output --------------------------------------------------------------
    std::set<VertexId> mst_nbrs_;
};

// ---------------------------------------------------------------------------
// Harness entry point.
// ---------------------------------------------------------------------------

struct MstRunResult {
    RunMetrics metrics;
    std::set<EdgeOrderKey> mst_edges;  // union of per-vertex marked edges
    Weight mst_weight = 0;
    std::map<VertexId, std::vector<Neighbor>> per_vertex;
    std::int64_t ecc_rt = -1;
    std::int64_t k = -1;
    std::uint64_t digest = 0;
    /// Kept alive so snapshot observers' cached views stay valid post-run.
    std::map<VertexId, std::unique_ptr<VertexProcess>> processes;
};

struct MstRunOptions {
    int bandwidth = 1;
    std::optional<std::int64_t> k_override;
    std::optional<VertexId> root;
    std::int64_t round_cap = -1;
    StepOrder step_order = StepOrder::Ascending;
    std::function<void(const SnapshotView&)> snapshot;
};

/// Runs the full distributed protocol and gathers per-vertex outputs.
/// Every marked edge must be marked at both endpoints; that is validated here.
MstRunResult run_mst(const WeightedGraph& g, const MstRunOptions& opts = {});

}  // namespace cmst
