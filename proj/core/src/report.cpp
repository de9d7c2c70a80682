#include "cmst/report.hpp"

#include <cmath>
#include <sstream>

#include "cmst/checker.hpp"
#include "cmst/oracle.hpp"

namespace cmst {

std::string RunReport::to_json() const {
    std::ostringstream os;
    os << "{\"instance\":\"" << instance << "\",\"n\":" << n << ",\"m\":" << m
       << ",\"seed\":" << seed << ",\"D\":" << diameter << ",\"ecc_rt\":" << ecc_rt
       << ",\"b\":" << b << ",\"k\":" << k << ",\"metrics\":" << metrics.to_json()
       << ",\"mst_weight\":" << mst_weight
       << ",\"verified\":" << (verified ? "true" : "false")
       << ",\"invariant_violations\":[";
    for (std::size_t i = 0; i < invariant_violations.size(); ++i) {
        if (i) os << ",";
        os << "\"" << invariant_violations[i] << "\"";
    }
    os << "],\"round_ratio\":" << round_ratio
       << ",\"message_ratio\":" << message_ratio << ",\"digest\":" << digest << "}";
    return os.str();
}

double round_envelope(std::int64_t n, std::int64_t ecc, int b) {
    double lg = std::max(1.0, std::log2(static_cast<double>(n)));
    double root = std::sqrt(static_cast<double>(n) / static_cast<double>(b));
    return (static_cast<double>(ecc) + root) * lg;
}

double message_envelope(std::int64_t n, std::int64_t m, std::int64_t max_id) {
    double lg = std::max(1.0, std::log2(static_cast<double>(n)));
    double ls = std::max(1, log_star2(max_id));
    return static_cast<double>(m) * lg + static_cast<double>(n) * lg * ls;
}

RunReport run_instance(const WeightedGraph& g, const std::string& label,
                       std::uint64_t seed, const RunInstanceOptions& opts) {
    RunReport rep;
    rep.instance = label;
    rep.n = static_cast<std::int64_t>(g.n());
    rep.m = static_cast<std::int64_t>(g.m());
    rep.seed = seed;
    rep.b = opts.bandwidth;
    rep.diameter = g.hop_diameter();

    MstResult oracle = kruskal_mst(g);

    std::optional<InvariantChecker> checker;
    MstRunOptions run_opts;
    run_opts.bandwidth = opts.bandwidth;
    run_opts.k_override = opts.k_override;
    run_opts.root = opts.root;
    run_opts.round_cap = opts.round_cap;
    run_opts.step_order = opts.step_order;
    if (opts.check_invariants) {
        checker.emplace(g, oracle, opts.root.value_or(g.min_vertex_id()));
        run_opts.snapshot = [&checker](const SnapshotView& v) { checker->observe(v); };
    }

    MstRunResult run = run_mst(g, run_opts);
    if (checker) {
        checker->finish();
        rep.invariant_violations = checker->violations();
    }

    rep.ecc_rt = run.ecc_rt;
    rep.k = run.k;
    rep.metrics = run.metrics;
    rep.mst_weight = run.mst_weight;
    rep.verified = run.mst_edges == oracle.edges;
    rep.digest = run.digest;
    rep.mst_edges = std::move(run.mst_edges);
    rep.round_ratio =
        static_cast<double>(run.metrics.rounds) / round_envelope(rep.n, rep.ecc_rt, rep.b);
    rep.message_ratio = static_cast<double>(run.metrics.messages) /
                        message_envelope(rep.n, rep.m, g.max_vertex_id());
    return rep;
}

}  // namespace cmst
