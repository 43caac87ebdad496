#pragma once

#include <cstdint>

#include "dfakit/dfa.hpp"

namespace dfakit {

enum class Algorithm { moore, trans, naive_pr, naive_pr_fused, sort_pr, trans_pr };

const char* to_string(Algorithm a);

/// Which concurrent write wins a leader election. min_index deterministically
/// elects the smallest differing state; arbitrary(seed) picks a uniformly
/// random candidate among the iteration's writers, reproducibly for a seed.
struct ElectionPolicy {
    enum class Kind { min_index, arbitrary };
    Kind kind = Kind::min_index;
    std::uint64_t seed = 0;

    static ElectionPolicy min_index() { return {Kind::min_index, 0}; }
    static ElectionPolicy arbitrary(std::uint64_t seed) { return {Kind::arbitrary, seed}; }
};

struct RefinementReport {
    Partition partition;
    // Outer passes that changed the partition; the final confirming pass is
    // not counted.
    std::uint32_t refining_iterations = 0;
    Algorithm algorithm = Algorithm::moore;
    // For trans/trans_pr: number of closure passes (trans) or doubling steps
    // (trans_pr); zero for the other algorithms.
    std::uint32_t closure_iterations = 0;
};

// Pair-node budget for trans_minimize. At the default, the bit-packed
// reachability matrix tops out at 2^32 bits (~512 MiB).
inline constexpr std::uint64_t kDefaultMaxPairNodes = 1ull << 16;

// Transition-table budget (entries) for the doubled alphabet of trans_pr.
inline constexpr std::uint64_t kDefaultMaxTransitions = 1ull << 28;

/// Sequential block-splitting minimisation: repeatedly split blocks by
/// (own block, successor blocks) signatures until stable. Serves as the
/// reference the parallel-style algorithms are checked against.
RefinementReport moore_minimize(const Dfa& dfa);

struct TransResult {
    RefinementReport report;
    ApartMatrix apart;
};

/// Pair-graph minimisation: marks state pairs apart via transitive
/// reachability in the product graph over Q x Q. Memory grows with n^4,
/// so the pair-node budget guards against runaway allocation.
TransResult trans_minimize(const Dfa& dfa, std::uint64_t max_pair_nodes = kDefaultMaxPairNodes);

/// Leader-election partition refinement. Each pass elects, per block, one
/// new leader among the states that disagree with their current leader on
/// some letter, then moves all disagreeing states to that leader's block,
/// so a block splits into at most two blocks per pass. All reads within a
/// pass observe the partition as it was when the pass started.
RefinementReport naive_pr(const Dfa& dfa, const ElectionPolicy& policy = ElectionPolicy::min_index());

/// Single-pass variant of naive_pr: election and reassignment are fused,
/// the first differing state (in scan order) claims the new-leader slot.
RefinementReport naive_pr_fused(const Dfa& dfa);

/// Sorting-based partition refinement: each pass recomputes per-state
/// successor-block signatures, stable-sorts states by (block, signature),
/// marks group boundaries by adjacent difference and assigns dense new
/// block ids with an inclusive scan. A block may split into arbitrarily
/// many sub-blocks per pass; terminates when the block count stops growing.
RefinementReport sort_pr(const Dfa& dfa);

/// Pointer-doubling alphabet extension: for every letter a and every
/// i in [0, floor(log2 n)] adds a letter that jumps 2^i consecutive
/// a-steps. Letter order: all powers of letter 0 ascending, then letter 1,
/// and so on; letter names are "<base>^1", "<base>^2", "<base>^4", ...
Dfa build_transitive_alphabet(const Dfa& dfa, std::uint64_t max_transitions = kDefaultMaxTransitions);

/// naive_pr run on the pointer-doubled automaton; shortcuts long unary
/// chains so refinement needs far fewer passes on chain-shaped inputs.
/// The reported closure_iterations is the number of doubling steps.
RefinementReport trans_pr(const Dfa& dfa, const ElectionPolicy& policy = ElectionPolicy::min_index(),
                          std::uint64_t max_transitions = kDefaultMaxTransitions);

} // namespace dfakit
