#include "cmst/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace cmst {

std::string family_name(Family f) {
    switch (f) {
        case Family::Path: return "path";
        case Family::Cycle: return "cycle";
        case Family::Grid: return "grid";
        case Family::Star: return "star";
        case Family::Complete: return "complete";
        case Family::GnmConnected: return "gnm_connected";
        case Family::Lollipop: return "lollipop";
    }
    return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
    if (name == "path") return Family::Path;
    if (name == "cycle") return Family::Cycle;
    if (name == "grid") return Family::Grid;
    if (name == "star") return Family::Star;
    if (name == "complete") return Family::Complete;
    if (name == "gnm_connected" || name == "gnm") return Family::GnmConnected;
    if (name == "lollipop") return Family::Lollipop;
    return std::nullopt;
}

std::string GraphFamily::describe() const {
    std::ostringstream os;
    os << family_name(family);
    switch (family) {
        case Family::Grid: os << " " << rows << "x" << cols; break;
        case Family::GnmConnected: os << " n=" << n << " m=" << m; break;
        case Family::Lollipop: os << " clique=" << clique << " tail=" << tail; break;
        default: os << " n=" << n; break;
    }
    os << " seed=" << seed;
    return os.str();
}

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed ^ 0x9e3779b97f4a7c15ULL) {}
    // mt19937_64's output sequence is pinned by the standard; we only avoid
    // std distributions, whose mappings are implementation-defined.
    std::uint64_t below(std::uint64_t bound) { return eng() % bound; }
};

[[noreturn]] void bad_params(const std::string& what) {
    throw GraphError(GraphErrorKind::InvalidParams, what);
}

// Distinct non-contiguous ids: a seeded stride over 1..n, then shuffled so
// the i-th structural vertex gets an arbitrary identity.
std::vector<VertexId> make_ids(std::int64_t n, Rng& rng) {
    static constexpr std::int64_t strides[] = {1, 2, 3, 5, 7};
    std::int64_t stride = strides[rng.below(5)];
    std::int64_t base = 1 + static_cast<std::int64_t>(rng.below(5));
    std::vector<VertexId> ids(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) ids[i] = base + i * stride;
    for (std::int64_t i = n - 1; i > 0; --i)
        std::swap(ids[i], ids[rng.below(static_cast<std::uint64_t>(i + 1))]);
    return ids;
}

struct Builder {
    std::int64_t n;
    Rng& rng;
    std::vector<VertexId> ids;
    std::vector<Edge> edges;
    std::set<std::pair<std::int64_t, std::int64_t>> used;  // structural indices

    Builder(std::int64_t n_, Rng& rng_) : n(n_), rng(rng_), ids(make_ids(n_, rng_)) {}

    Weight draw_weight() {
        return 1 + static_cast<Weight>(rng.below(static_cast<std::uint64_t>(n) *
                                                 static_cast<std::uint64_t>(n)));
    }

    bool add(std::int64_t i, std::int64_t j) {
        auto p = std::minmax(i, j);
        if (i == j || !used.insert({p.first, p.second}).second) return false;
        edges.push_back({ids[i], ids[j], draw_weight()});
        return true;
    }

    WeightedGraph finish() {
        if (n == 1) return single_vertex_graph(ids[0]);
        return build_graph(edges);
    }
};

}  // namespace

WeightedGraph generate(const GraphFamily& spec) {
    Rng rng(spec.seed);
    switch (spec.family) {
        case Family::Path: {
            if (spec.n < 1) bad_params("path requires n >= 1");
            Builder b(spec.n, rng);
            for (std::int64_t i = 0; i + 1 < spec.n; ++i) b.add(i, i + 1);
            return b.finish();
        }
        case Family::Cycle: {
            if (spec.n < 3) bad_params("cycle requires n >= 3");
            Builder b(spec.n, rng);
            for (std::int64_t i = 0; i + 1 < spec.n; ++i) b.add(i, i + 1);
            b.add(spec.n - 1, 0);
            return b.finish();
        }
        case Family::Grid: {
            if (spec.rows < 1 || spec.cols < 1) bad_params("grid requires rows, cols >= 1");
            std::int64_t n = spec.rows * spec.cols;
            Builder b(n, rng);
            auto at = [&](std::int64_t r, std::int64_t c) { return r * spec.cols + c; };
            for (std::int64_t r = 0; r < spec.rows; ++r)
                for (std::int64_t c = 0; c < spec.cols; ++c) {
                    if (c + 1 < spec.cols) b.add(at(r, c), at(r, c + 1));
                    if (r + 1 < spec.rows) b.add(at(r, c), at(r + 1, c));
                }
            return b.finish();
        }
        case Family::Star: {
            if (spec.n < 2) bad_params("star requires n >= 2");
            Builder b(spec.n, rng);
            for (std::int64_t i = 1; i < spec.n; ++i) b.add(0, i);
            return b.finish();
        }
        case Family::Complete: {
            if (spec.n < 2) bad_params("complete requires n >= 2");
            Builder b(spec.n, rng);
            for (std::int64_t i = 0; i < spec.n; ++i)
                for (std::int64_t j = i + 1; j < spec.n; ++j) b.add(i, j);
            return b.finish();
        }
        case Family::GnmConnected: {
            std::int64_t maxm = spec.n * (spec.n - 1) / 2;
            if (spec.n < 2 || spec.m < spec.n - 1 || spec.m > maxm)
                bad_params("gnm_connected requires n >= 2 and n-1 <= m <= n(n-1)/2");
            Builder b(spec.n, rng);
            // random recursive tree keeps it connected, then fill to m
            for (std::int64_t i = 1; i < spec.n; ++i)
                b.add(i, static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(i))));
            std::int64_t remaining = spec.m - (spec.n - 1);
            while (remaining > 0) {
                std::int64_t i = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.n)));
                std::int64_t j = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(spec.n)));
                if (b.add(i, j)) --remaining;
            }
            return b.finish();
        }
        case Family::Lollipop: {
            if (spec.clique < 1 || spec.tail < 0 || spec.clique + spec.tail < 2)
                bad_params("lollipop requires clique >= 1, tail >= 0, n >= 2");
            std::int64_t n = spec.clique + spec.tail;
            Builder b(n, rng);
            for (std::int64_t i = 0; i < spec.clique; ++i)
                for (std::int64_t j = i + 1; j < spec.clique; ++j) b.add(i, j);
            // tail hangs off structural vertex 0
            for (std::int64_t i = 0; i < spec.tail; ++i)
                b.add(i == 0 ? 0 : spec.clique + i - 1, spec.clique + i);
            return b.finish();
        }
    }
    bad_params("unknown family");
}

}  // namespace cmst
