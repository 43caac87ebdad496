#pragma once

#include <cstdint>
#include <vector>

#include "dfakit/dfa.hpp"

namespace dfakit {

enum class Verdict { equivalent, included, counterexample };

struct ProductResult {
    Verdict verdict = Verdict::equivalent;
    // Shortest witness word (letter ids of the first automaton) when the
    // verdict is counterexample; the empty word is a valid witness when the
    // initial states already disagree.
    std::vector<LetterId> counterexample;
    // Distinct product pairs inserted into the visited set.
    std::uint64_t explored_states = 0;
    // Completed breadth-first waves.
    std::uint32_t levels = 0;
};

enum class ExploreMode { equivalence, inclusion, full };

inline constexpr std::uint64_t kDefaultMaxVisited = 1ull << 26;

struct ExploreOptions {
    // Match letters by name instead of by position; requires letter_names
    // on both inputs and identical name sets.
    bool match_letters_by_name = false;
    // Cap on visited product pairs; exceeding it raises ResourceError.
    std::uint64_t max_visited = kDefaultMaxVisited;
};

/// Level-synchronous BFS over the synchronous product of two DFAs with a
/// plain visited set (no transitive closure is maintained). equivalence
/// and inclusion modes stop at the first acceptance mismatch and return a
/// shortest counterexample; full mode explores every reachable pair and
/// reports counts, returning a counterexample verdict (under the
/// equivalence test) if any mismatch pair exists.
ProductResult explore_product(const Dfa& a, const Dfa& b, ExploreMode mode,
                              const ExploreOptions& opts = {});

/// Verdict equivalent iff both automata accept the same language.
ProductResult check_equiv(const Dfa& a, const Dfa& b, const ExploreOptions& opts = {});

/// Verdict included iff every word accepted by `a` is accepted by `b`.
ProductResult check_inclusion(const Dfa& a, const Dfa& b, const ExploreOptions& opts = {});

} // namespace dfakit
