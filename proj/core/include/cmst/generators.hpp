#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cmst/graph.hpp"

namespace cmst {

enum class Family {
    Path,
    Cycle,
    Grid,
    Star,
    Complete,
    GnmConnected,
    Lollipop,
};

std::string family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Instance descriptor. The same (family, params, seed) always yields a
/// bit-identical graph. Weights are integers in [1, n^2], duplicates allowed.
/// Vertex identities are distinct but deliberately not 1..n (a seeded stride
/// and shuffle), so id-dependent protocol logic is actually exercised.
struct GraphFamily {
    Family family = Family::Path;
    std::int64_t n = 0;       // vertex count (path/cycle/star/complete/gnm)
    std::int64_t m = 0;       // edge count (gnm)
    std::int64_t rows = 0;    // grid
    std::int64_t cols = 0;    // grid
    std::int64_t clique = 0;  // lollipop
    std::int64_t tail = 0;    // lollipop
    std::uint64_t seed = 0;

    std::string describe() const;
};

WeightedGraph generate(const GraphFamily& spec);

}  // namespace cmst
