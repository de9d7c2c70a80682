#include "cmst/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cmst {

std::string RunMetrics::to_json() const {
    std::ostringstream os;
    os << "{\"rounds\":" << rounds << ",\"messages\":" << messages
       << ",\"words\":" << words << ",\"stages\":{";
    bool first = true;
    for (const auto& [label, c] : stages) {
        if (!first) os << ",";
        first = false;
        os << "\"" << label << "\":{\"rounds\":" << c.rounds
           << ",\"messages\":" << c.messages << ",\"words\":" << c.words << "}";
    }
    os << "}}";
    return os.str();
}

namespace {

std::int64_t default_round_cap(const WeightedGraph& g) {
    std::int64_t n = static_cast<std::int64_t>(g.n());
    std::int64_t d = g.hop_diameter();
    std::int64_t lg = 0;
    while ((std::int64_t{1} << lg) < n) ++lg;
    return 64 * (n + d * lg);
}

}  // namespace

SimResult run_simulation(const WeightedGraph& g, const ProcessFactory& factory,
                         const SimOptions& opts) {
    const std::int64_t cap =
        opts.round_cap >= 0 ? opts.round_cap : default_round_cap(g);
    const std::int64_t budget =
        static_cast<std::int64_t>(opts.bandwidth) * opts.words_per_unit;
    const std::size_t n = g.n();

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = opts.step_order == StepOrder::Ascending ? i : n - 1 - i;

    std::vector<std::unique_ptr<VertexProcess>> procs(n);
    std::map<VertexId, VertexProcess*> proc_view;
    std::vector<char> halted(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        VertexId v = g.vertices()[i];
        procs[i] = factory(v, g.neighbors(v));
        proc_view[v] = procs[i].get();
    }

    RunMetrics metrics;
    std::string stage = "default";
    std::vector<RoundPacket> in_flight;
    std::vector<RoundPacket> sent;
    std::size_t live = n;
    std::int64_t round = 0;

    while (live > 0) {
        ++round;
        if (round > cap)
            throw SimError(SimErrorKind::RoundLimitExceeded,
                           "round cap " + std::to_string(cap) +
                               " exceeded; protocol livelock?",
                           -1, -1, round);

        // Deliver last round's packets in canonical (dst, src) order; each
        // vertex sees a contiguous slice of the sorted vector.
        std::sort(in_flight.begin(), in_flight.end(),
                  [](const RoundPacket& a, const RoundPacket& b) {
                      return std::tie(a.dst, a.src) < std::tie(b.dst, b.src);
                  });
        for (const RoundPacket& p : in_flight)
            if (halted[g.index_of(p.dst)])
                throw SimError(SimErrorKind::DeliveredToHalted,
                               "packet from " + std::to_string(p.src) +
                                   " delivered to halted vertex " +
                                   std::to_string(p.dst),
                               p.dst, p.src, round);

        sent.clear();
        std::optional<std::pair<VertexId, std::string>> announce;

        for (std::size_t i : order) {
            if (halted[i]) continue;
            VertexId v = g.vertices()[i];
            auto lo = std::lower_bound(
                in_flight.begin(), in_flight.end(), v,
                [](const RoundPacket& p, VertexId x) { return p.dst < x; });
            auto hi = std::upper_bound(
                in_flight.begin(), in_flight.end(), v,
                [](VertexId x, const RoundPacket& p) { return x < p.dst; });
            StepResult res = procs[i]->step(
                round,
                std::span<const RoundPacket>(
                    in_flight.data() + (lo - in_flight.begin()),
                    static_cast<std::size_t>(hi - lo)));

            std::set<VertexId> dsts;
            for (RoundPacket& p : res.outbox) {
                p.src = v;
                if (p.payload.empty())
                    throw SimError(SimErrorKind::EmptyPayload,
                                   "empty payload from " + std::to_string(v),
                                   v, p.dst, round);
                const auto& nbrs = g.neighbors(v);
                bool is_nbr = std::any_of(nbrs.begin(), nbrs.end(),
                                          [&](const Neighbor& nb) { return nb.id == p.dst; });
                if (!is_nbr)
                    throw SimError(SimErrorKind::NonNeighborSend,
                                   std::to_string(v) + " sent to non-neighbor " +
                                       std::to_string(p.dst),
                                   v, p.dst, round);
                if (!dsts.insert(p.dst).second)
                    throw SimError(SimErrorKind::DuplicatePacket,
                                   std::to_string(v) + " sent two packets to " +
                                       std::to_string(p.dst) + " in one round",
                                   v, p.dst, round);
                if (static_cast<std::int64_t>(p.payload.size()) > budget)
                    throw SimError(
                        SimErrorKind::BandwidthExceeded,
                        std::to_string(v) + " -> " + std::to_string(p.dst) +
                            ": " + std::to_string(p.payload.size()) +
                            " words exceeds budget " + std::to_string(budget) +
                            " at round " + std::to_string(round),
                        v, p.dst, round);
                sent.push_back(std::move(p));
            }
            if (res.stage && (!announce || v < announce->first))
                announce = {v, *res.stage};
            if (res.halt) {
                halted[i] = 1;
                --live;
            }
        }

        // Canonical order so downstream accounting is iteration-order-free.
        std::sort(sent.begin(), sent.end(),
                  [](const RoundPacket& a, const RoundPacket& b) {
                      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
                  });

        if (announce) stage = announce->second;
        StageCounters& sc = metrics.stages[stage];
        sc.rounds += 1;
        metrics.rounds = round;
        for (const RoundPacket& p : sent) {
            metrics.messages += 1;
            metrics.words += static_cast<std::int64_t>(p.payload.size());
            sc.messages += 1;
            sc.words += static_cast<std::int64_t>(p.payload.size());
        }

        if (opts.snapshot) {
            SnapshotView view;
            view.round = round;
            view.graph = &g;
            view.delivered = &in_flight;  // what arrived this round
            view.processes = &proc_view;
            opts.snapshot(view);
        }

        std::swap(in_flight, sent);
    }

    if (!in_flight.empty())
        throw SimError(SimErrorKind::DeliveredToHalted,
                       "all vertices halted with " +
                           std::to_string(in_flight.size()) +
                           " packets still in flight",
                       in_flight.front().dst, in_flight.front().src, round);

    SimResult result;
    result.metrics = std::move(metrics);
    for (std::size_t i = 0; i < n; ++i)
        result.processes[g.vertices()[i]] = std::move(procs[i]);
    return result;
}

std::uint64_t replay_digest(const RunMetrics& metrics,
                            const std::set<EdgeOrderKey>& output_edges) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(metrics.rounds));
    mix(static_cast<std::uint64_t>(metrics.messages));
    mix(static_cast<std::uint64_t>(metrics.words));
    for (const EdgeOrderKey& k : output_edges) {
        mix(static_cast<std::uint64_t>(k.w));
        mix(static_cast<std::uint64_t>(k.lo));
        mix(static_cast<std::uint64_t>(k.hi));
    }
    return h;
}

}  // namespace cmst
