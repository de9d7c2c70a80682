#pragma once

#include <optional>
#include <set>
#include <string>

#include "cmst/generators.hpp"
#include "cmst/graph.hpp"
#include "cmst/mst_protocol.hpp"

namespace cmst {

/// One protocol run, verified against the oracle, as one JSON object.
struct RunReport {
    std::string instance;  // family descriptor or file name
    std::int64_t n = 0, m = 0;
    std::uint64_t seed = 0;
    std::int64_t diameter = 0;  // exact, centralized
    std::int64_t ecc_rt = 0;
    int b = 1;
    std::int64_t k = 0;
    RunMetrics metrics;
    Weight mst_weight = 0;
    bool verified = false;
    std::vector<std::string> invariant_violations;
    double round_ratio = 0.0;    // rounds / ((ecc + sqrt(n/b)) * log2 n)
    double message_ratio = 0.0;  // messages / (m log2 n + n log2 n log* n)
    std::uint64_t digest = 0;
    /// Assembled result; not part of the JSON object.
    std::set<EdgeOrderKey> mst_edges;

    std::string to_json() const;
};

struct RunInstanceOptions {
    int bandwidth = 1;
    std::optional<std::int64_t> k_override;
    std::optional<VertexId> root;
    std::int64_t round_cap = -1;
    bool check_invariants = false;
    StepOrder step_order = StepOrder::Ascending;
};

/// Normalization denominators used for the empirical complexity envelopes.
double round_envelope(std::int64_t n, std::int64_t ecc, int b);
double message_envelope(std::int64_t n, std::int64_t m, std::int64_t max_id);

/// Generates/loads nothing: runs the protocol on g, verifies against the
/// Kruskal oracle, optionally with the god-mode checker attached.
RunReport run_instance(const WeightedGraph& g, const std::string& label,
                       std::uint64_t seed, const RunInstanceOptions& opts);

}  // namespace cmst
