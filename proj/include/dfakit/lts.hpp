#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dfakit/dfa.hpp"

namespace dfakit {

/// A labelled transition system: possibly nondeterministic, possibly
/// incomplete, with free-form string labels.
struct Lts {
    StateId num_states = 0;
    StateId initial = 0;
    struct Transition {
        StateId from;
        std::string label;
        StateId to;
    };
    std::vector<Transition> transitions;
};

/// Parses the Aldebaran textual format:
///   des (<initial>, <num_transitions>, <num_states>)
///   (<from>, "<label>", <to>)
/// Labels may be quoted or bare; duplicates are preserved as given.
Lts load_aut(std::string_view text);

struct DeterminizeOptions {
    std::uint64_t max_states = 1ull << 22;
    double timeout_s = 600.0;
};

/// Powerset construction. Subset states are numbered in BFS discovery
/// order; labels are scanned in order of first appearance in the input.
/// The result has at most one transition per (state, label).
Lts determinize(const Lts& lts, const DeterminizeOptions& opts = {});

/// Turns a deterministic LTS into a complete DFA: every original state
/// becomes accepting and one fresh rejecting sink (the last state id)
/// absorbs all missing transitions. Letter ids follow first-appearance
/// order of the labels; letter_names records them.
Dfa complete_to_dfa(const Lts& deterministic);

} // namespace dfakit
