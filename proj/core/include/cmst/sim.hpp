#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmst/graph.hpp"

namespace cmst {

/// Atomic payload unit: one vertex identity, edge weight, fragment identity,
/// interval endpoint or control tag. Control tags are negative so framed
/// (tag-free) payload sections, whose values are all non-negative, can be
/// told apart from tagged ones.
using Word = std::int64_t;

/// One CONGEST message carries up to this many Words per bandwidth unit:
/// enough for (weight, endpoint id, endpoint id, fragment id, tag).
inline constexpr int kWordsPerUnit = 5;

/// Content sent over one directed edge in one round.
struct RoundPacket {
    VertexId src = 0;
    VertexId dst = 0;
    std::vector<Word> payload;
};

struct StageCounters {
    std::int64_t rounds = 0;
    std::int64_t messages = 0;
    std::int64_t words = 0;
};

struct RunMetrics {
    std::int64_t rounds = 0;
    std::int64_t messages = 0;
    std::int64_t words = 0;
    std::map<std::string, StageCounters> stages;

    std::string to_json() const;
};

struct StepResult {
    /// At most one packet per incident directed edge; src is filled by the
    /// engine; payloads must be nonempty and at most B words.
    std::vector<RoundPacket> outbox;
    bool halt = false;
    /// Metrics stage announcement, effective from the current round on.
    std::optional<std::string> stage;
};

/// Per-vertex protocol state machine. A process may read only its own state,
/// its inbox and what the engine handed it at construction (own id, incident
/// edges); there is no channel to global state.
class VertexProcess {
public:
    virtual ~VertexProcess() = default;
    virtual StepResult step(std::int64_t round,
                            std::span<const RoundPacket> inbox) = 0;
};

using ProcessFactory = std::function<std::unique_ptr<VertexProcess>(
    VertexId id, const std::vector<Neighbor>& neighbors)>;

/// God-mode view handed to the snapshot hook after every round. Test-only
/// observation channel; the protocol itself never sees it.
struct SnapshotView {
    std::int64_t round = 0;
    const WeightedGraph* graph = nullptr;
    /// Packets delivered at the start of this round.
    const std::vector<RoundPacket>* delivered = nullptr;
    const std::map<VertexId, VertexProcess*>* processes = nullptr;

    const VertexProcess& process(VertexId v) const { return *processes->at(v); }
};

enum class SimErrorKind {
    BandwidthExceeded,
    NonNeighborSend,
    RoundLimitExceeded,
    DeliveredToHalted,
    DuplicatePacket,
    EmptyPayload,
};

class SimError : public std::runtime_error {
public:
    SimError(SimErrorKind kind, std::string msg, VertexId vertex = -1,
             VertexId peer = -1, std::int64_t round = -1)
        : std::runtime_error(std::move(msg)),
          kind_(kind), vertex_(vertex), peer_(peer), round_(round) {}
    SimErrorKind kind() const { return kind_; }
    VertexId vertex() const { return vertex_; }
    VertexId peer() const { return peer_; }
    std::int64_t round() const { return round_; }

private:
    SimErrorKind kind_;
    VertexId vertex_;
    VertexId peer_;
    std::int64_t round_;
};

enum class StepOrder { Ascending, Descending };

struct SimOptions {
    int bandwidth = 1;                 // b in CONGEST(b log n)
    int words_per_unit = kWordsPerUnit;
    /// Safety cap; < 0 means the default 64 * (n + D * ceil(log2 n)).
    std::int64_t round_cap = -1;
    /// Iteration order over vertices within a round. The result must not
    /// depend on it; tests run both.
    StepOrder step_order = StepOrder::Ascending;
    std::function<void(const SnapshotView&)> snapshot;
};

struct SimResult {
    RunMetrics metrics;
    std::map<VertexId, std::unique_ptr<VertexProcess>> processes;
};

/// Runs the synchronous round engine until every vertex has halted: each
/// round delivers the packets sent in the previous round, steps every live
/// vertex exactly once, then enforces the bandwidth contract on the merged
/// outboxes and invokes the snapshot hook.
SimResult run_simulation(const WeightedGraph& g, const ProcessFactory& factory,
                         const SimOptions& opts = {});

/// Stable 64-bit digest over (rounds, messages, words, sorted output edges).
/// Equal digests across runs mean the execution path was deterministic.
std::uint64_t replay_digest(const RunMetrics& metrics,
                            const std::set<EdgeOrderKey>& output_edges);

}  // namespace cmst
