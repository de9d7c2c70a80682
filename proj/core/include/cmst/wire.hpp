#pragma once

#include "cmst/sim.hpp"

namespace cmst::wire {

// Control tags are negative; all protocol values (ids, weights, interval
// endpoints, colors, counters) are non-negative. A packet is parsed as an
// optional tag-free prefix of fixed-stride items (whose leading word is
// >= 0) followed by tagged records.

// BFS tree / intervals era
inline constexpr Word kJoin = -1;      // [kJoin, depth]
inline constexpr Word kConfirm = -2;   // [kConfirm]
inline constexpr Word kDecline = -3;   // [kDecline]
inline constexpr Word kSize = -4;      // [kSize, subtree_size, max_id, max_depth]
inline constexpr Word kInterval = -5;  // [kInterval, lo, hi]
inline constexpr Word kGo = -6;        // [kGo, max_id, ecc, k, n]

// base forest era (round-windowed)
inline constexpr Word kDiam = -10;       // [kDiam, height, through]
inline constexpr Word kParticipate = -11;  // [kParticipate, small]
inline constexpr Word kSmallFlag = -12;  // [kSmallFlag, small] to all neighbors
inline constexpr Word kMwoe = -13;       // [kMwoe, w, lo, hi]
inline constexpr Word kMwoeNone = -14;   // [kMwoeNone]
inline constexpr Word kChosen = -15;     // [kChosen, w, lo, hi]
inline constexpr Word kBaseDone = -16;   // [kBaseDone]
inline constexpr Word kAnnounce = -17;   // [kAnnounce] over the fragment MWOE
inline constexpr Word kCandRoot = -18;   // [kCandRoot, is_root]
inline constexpr Word kColorDown = -19;  // [kColorDown, step, color]
inline constexpr Word kColorCross = -20; // [kColorCross, step, color]
inline constexpr Word kColorUp = -21;    // [kColorUp, step, color]
inline constexpr Word kCensus = -22;     // [kCensus, min_unmatched_child]
inline constexpr Word kCensusNone = -23; // [kCensusNone]
inline constexpr Word kSelect = -24;     // [kSelect, child_frag]
inline constexpr Word kSelectCross = -25;  // [kSelectCross]
inline constexpr Word kIMatched = -26;   // [kIMatched] toward own MWOE owner
inline constexpr Word kIMatchedCross = -27;  // [kIMatchedCross]
inline constexpr Word kMatchedUp = -28;  // [kMatchedUp] entry -> fragment root
inline constexpr Word kReroot = -29;     // [kReroot]
inline constexpr Word kKeepRoot = -30;   // [kKeepRoot]
inline constexpr Word kAttach = -31;     // [kAttach] over the merge edge
inline constexpr Word kNewId = -32;      // [kNewId, fragment_id]
inline constexpr Word kFragId = -33;     // [kFragId, fragment_id] to all neighbors

// directory + Boruvka levels era (self-paced)
inline constexpr Word kDirEnd = -40;     // [kDirEnd]; directory pairs are a
                                         // tag-free stride-2 prefix [frag, lo]
inline constexpr Word kLevelZero = -41;  // [kLevelZero] enables level 0
inline constexpr Word kMwup = -42;       // [kMwup, w, lo, hi, far_coarse]
inline constexpr Word kMwupNone = -43;   // [kMwupNone]
inline constexpr Word kUpEnd = -44;      // [kUpEnd]; candidate records are a
                                         // tag-free stride-5 prefix
                                         // [coarse, far, w, lo, hi]
inline constexpr Word kDownAdopt = -45;  // [kDownAdopt, target_lo, new_id, final]
inline constexpr Word kDownWinner = -46; // [kDownWinner, target_lo, w, a, b]
inline constexpr Word kAdopt = -47;      // [kAdopt, new_id, final]
inline constexpr Word kWinnerKey = -48;  // [kWinnerKey, w, a, b]
inline constexpr Word kMstMark = -49;    // [kMstMark]
inline constexpr Word kCurFrag = -50;    // [kCurFrag, coarse_id]
inline constexpr Word kTerminate = -51;  // [kTerminate]

/// Payload words a tagged record occupies, tag included.
int arity(Word tag);

}  // namespace cmst::wire
