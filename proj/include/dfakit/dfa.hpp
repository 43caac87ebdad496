#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dfakit {

using StateId = std::uint32_t;
using LetterId = std::uint32_t;

// Sentinel for "no state" (removed / unmapped states).
inline constexpr StateId kNoState = static_cast<StateId>(-1);

/// A complete deterministic finite automaton. States are 0..num_states-1,
/// letters 0..alphabet_size-1. The transition table is letter-major:
/// delta[a][q] is the a-successor of q. The initial state is optional;
/// minimisation works without one, equivalence checking does not.
struct Dfa {
    StateId num_states = 0;
    LetterId alphabet_size = 0;
    std::vector<std::vector<StateId>> delta;
    std::vector<bool> accepting;
    std::optional<StateId> initial;
    std::optional<std::vector<std::string>> letter_names;

    StateId step(StateId q, LetterId a) const { return delta[a][q]; }

    // Extended transition function: runs `word` from q.
    StateId run(StateId q, std::span<const LetterId> word) const {
        for (LetterId a : word) q = delta[a][q];
        return q;
    }

    bool is_accepting(StateId q) const { return accepting[q]; }

    bool operator==(const Dfa&) const = default;
};

/// Structural checks. Returns one human-readable message per violation,
/// each naming the offending field and index; empty means well-formed.
std::vector<std::string> validate(const Dfa& dfa);

/// A partition of states into blocks, always kept in normal form:
/// block ids are dense 0..num_blocks-1, numbered by first occurrence
/// when scanning states upwards. Two partitions are equal iff their
/// equivalence kernels coincide, so equality is plain array comparison.
struct Partition {
    std::vector<StateId> block_of;
    StateId num_blocks = 0;

    // Normalizes arbitrary labels (leader ids, hash buckets, ...) by
    // first occurrence.
    static Partition from_labels(std::span<const StateId> labels);
    static Partition identity(StateId n);
    static Partition single_block(StateId n);

    bool operator==(const Partition&) const = default;
};

/// Symmetric, irreflexive "these two states are not equivalent" matrix.
class ApartMatrix {
public:
    explicit ApartMatrix(StateId n);

    StateId num_states() const { return n_; }

    bool apart(StateId q, StateId r) const {
        std::size_t i = static_cast<std::size_t>(q) * n_ + r;
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }

    // Marks both (q,r) and (r,q); the diagonal stays false.
    void set_apart(StateId q, StateId r);

private:
    StateId n_;
    std::vector<std::uint64_t> bits_;
};

/// Collapses each block of `p` to a single state. Rejects partitions that
/// mix accepting and non-accepting states in one block or are not closed
/// under the transition function (both indicate a buggy minimiser).
Dfa quotient(const Dfa& dfa, const Partition& p);

/// Drops states unreachable from the initial state. The surviving states
/// are renumbered in BFS discovery order (letters scanned upwards); the
/// returned map sends each old state to its new id, or kNoState.
std::pair<Dfa, std::vector<StateId>> prune_unreachable(const Dfa& dfa);

/// Renumbers states by deterministic BFS from the initial state. Two
/// complete reachable DFAs are isomorphic iff their canonical forms are
/// byte-identical when serialized. Requires every state to be reachable.
Dfa canonical_form(const Dfa& dfa);

/// Builds the partition whose blocks are the classes of the complement
/// of `m`. Throws if the complement is not an equivalence relation
/// (which indicates a prematurely terminated closure).
Partition partition_from_apart(const ApartMatrix& m);

} // namespace dfakit
