#pragma once

#include <cstdint>
#include <vector>

#include "dfakit/dfa.hpp"

namespace dfakit {

inline constexpr std::uint64_t kDefaultStateBudget = 1ull << 26;

/// Binary word defined by bits(0) = "1", bits(1) = "0",
/// bits(m+1) = bits(m) ++ bits(m-1).
struct FibWord {
    std::uint32_t index = 0;
    std::vector<bool> bits;
};

FibWord fib_word(std::uint32_t m, std::uint64_t max_length = kDefaultStateBudget);

/// Fibonacci-number helper used by gen_cycle: fib(1) = 1, fib(2) = 2,
/// fib(n) = fib(n-1) + fib(n-2).
std::uint64_t cycle_fib(std::uint32_t n);

/// Unary cyclic automaton over fib_word(m): |bits| states on one cycle,
/// accepting exactly at the 1-positions, initial state 0. Hard for
/// partition refinement: every pass peels off at most one block.
Dfa gen_fib(std::uint32_t m, std::uint64_t max_states = kDefaultStateBudget);

/// Recursive halving family: 2^n states (bitstrings of length n, most
/// significant bit first), n-1 letters and no initial state. Letter a_m
/// (id m-1) flips bit m and clears bits m-1..0 when bit m-1 is set, and
/// is the identity otherwise. Every possible split halves a block.
Dfa gen_bitsplitter(std::uint32_t n, std::uint64_t max_states = kDefaultStateBudget);

/// Bit-splitter extended with an initialisation phase and an initial
/// state: states are (c, sigma) pairs encoded as c*2^n + sigma, initial
/// (0, 0^n). Letter order: r (sets c to 1), then b_1..b_n (b_m sets
/// sigma's bit m-1 while c = 0), then a_1..a_{n-1} (the bit-splitter
/// letters, active only while c = 1). Accepting: c = 1 and top sigma bit 1.
Dfa gen_bitsplitter_ext(std::uint32_t n, std::uint64_t max_states = kDefaultStateBudget);

/// Cyclic multi-letter family: cycle_fib(n) states, letters a_0..a_m with
/// m = max(ceil(log10(cycle_fib(n))), 1), step size j*100+1 for letter j,
/// single accepting state cycle_fib(n-1), initial state 0.
Dfa gen_cycle(std::uint32_t n, std::uint64_t max_states = kDefaultStateBudget);

/// Sliding window over the last n input bits: state bits b_{n-1}..b_0 with
/// b_0 the most recent. Reading v shifts every bit up (discarding b_{n-1})
/// and sets b_0 := v. Accepting iff the oldest remembered bit b_{n-1} is 1.
/// Letters: 0 = f, 1 = t. Initial state: all zeros.
Dfa gen_memory_perfect(std::uint32_t n, std::uint64_t max_states = kDefaultStateBudget);

/// Like gen_memory_perfect, but forgetful: states whose two most
/// significant bits read "10" behave as the all-zero state for their
/// outgoing transitions (the remembered history is dropped). This choice
/// of reset semantics is frozen by the product-size calibration in the
/// acceptance suite. Requires n >= 2.
Dfa gen_memory_forgetful(std::uint32_t n, std::uint64_t max_states = kDefaultStateBudget);

/// Uniform random DFA: every transition target drawn independently and
/// uniformly, each state accepting with probability accept_fraction,
/// initial state 0. Deterministic for a given seed.
Dfa gen_random_dfa(StateId n, LetterId k, double accept_fraction, std::uint64_t seed);

} // namespace dfakit
