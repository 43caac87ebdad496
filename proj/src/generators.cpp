#include "dfakit/generators.hpp"

#include <random>
#include <stdexcept>
#include <string>

#include "dfakit/errors.hpp"

namespace dfakit {

namespace {

void check_budget(std::uint64_t states, std::uint64_t budget, const char* who) {
    if (states > budget) {
        throw ResourceError(std::string(who) + ": " + std::to_string(states) +
                            " states exceed the budget of " + std::to_string(budget));
    }
}

} // namespace

FibWord fib_word(std::uint32_t m, std::uint64_t max_length) {
    // Lengths follow the Fibonacci numbers; guard before concatenating.
    std::uint64_t len_prev = 1, len_cur = 1; // |bits(0)|, |bits(1)|
    for (std::uint32_t i = 2; i <= m; ++i) {
        std::uint64_t next = len_cur + len_prev;
        len_prev = len_cur;
        len_cur = next;
        if (len_cur > max_length) {
            throw ResourceError("fib_word: word " + std::to_string(m) + " has " +
                                std::to_string(len_cur) + "+ bits, budget is " +
                                std::to_string(max_length));
        }
    }

    FibWord w;
    w.index = m;
    if (m == 0) {
        w.bits = {true};
        return w;
    }
    std::vector<bool> prev = {true};  // bits(0) = "1"
    std::vector<bool> cur = {false};  // bits(1) = "0"
    for (std::uint32_t i = 2; i <= m; ++i) {
        std::vector<bool> next = cur;
        next.insert(next.end(), prev.begin(), prev.end());
        prev = std::move(cur);
        cur = std::move(next);
    }
    w.bits = std::move(cur);
    return w;
}

std::uint64_t cycle_fib(std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("cycle_fib: n must be positive");
    std::uint64_t a = 1, b = 2; // fib(1), fib(2)
    if (n == 1) return a;
    for (std::uint32_t i = 3; i <= n; ++i) {
        std::uint64_t next = a + b;
        a = b;
        b = next;
    }
    return b;
}

Dfa gen_fib(std::uint32_t m, std::uint64_t max_states) {
    if (m < 2) throw std::invalid_argument("gen_fib: word index must be at least 2");
    FibWord w = fib_word(m, max_states);
    const StateId n = static_cast<StateId>(w.bits.size());

    Dfa dfa;
    dfa.num_states = n;
    dfa.alphabet_size = 1;
    dfa.delta.assign(1, std::vector<StateId>(n));
    for (StateId q = 0; q < n; ++q) dfa.delta[0][q] = (q + 1) % n;
    dfa.accepting.assign(w.bits.begin(), w.bits.end());
    dfa.initial = 0;
    return dfa;
}

Dfa gen_bitsplitter(std::uint32_t n, std::uint64_t max_states) {
    if (n < 1) throw std::invalid_argument("gen_bitsplitter: n must be at least 1");
    if (n >= 32) throw ResourceError("gen_bitsplitter: 2^" + std::to_string(n) + " states overflow");
    const std::uint64_t states = 1ull << n;
    check_budget(states, max_states, "gen_bitsplitter");
    const StateId N = static_cast<StateId>(states);

    Dfa dfa;
    dfa.num_states = N;
    dfa.alphabet_size = n - 1;
    dfa.delta.reserve(n - 1);
    // Letter a_m (id m-1): when bit m-1 is set, flip bit m and clear all
    // lower bits; otherwise stay put. Bit n-1 is the accepting half.
    for (std::uint32_t m = 1; m < n; ++m) {
        std::vector<StateId> row(N);
        const StateId test = 1u << (m - 1);
        const StateId flip = 1u << m;
        const StateId clear = ~(flip - 1);
        for (StateId q = 0; q < N; ++q) {
            row[q] = (q & test) ? ((q ^ flip) & clear) : q;
        }
        dfa.delta.push_back(std::move(row));
    }
    dfa.accepting.resize(N);
    for (StateId q = 0; q < N; ++q) dfa.accepting[q] = q >= (N >> 1);
    // This family carries no initial state.
    return dfa;
}

Dfa gen_bitsplitter_ext(std::uint32_t n, std::uint64_t max_states) {
    if (n < 1) throw std::invalid_argument("gen_bitsplitter_ext: n must be at least 1");
    if (n >= 31) throw ResourceError("gen_bitsplitter_ext: 2^" + std::to_string(n + 1) + " states overflow");
    const std::uint64_t states = 1ull << (n + 1);
    check_budget(states, max_states, "gen_bitsplitter_ext");
    const StateId N = static_cast<StateId>(states);
    const StateId c_bit = 1u << n;
    const StateId sigma_mask = c_bit - 1;

    Dfa dfa;
    dfa.num_states = N;
    dfa.alphabet_size = 2 * n; // r, b_1..b_n, a_1..a_{n-1}
    dfa.delta.reserve(dfa.alphabet_size);
    dfa.letter_names.emplace();

    // r: enter the bit-splitter phase.
    {
        std::vector<StateId> row(N);
        for (StateId q = 0; q < N; ++q) row[q] = q | c_bit;
        dfa.delta.push_back(std::move(row));
        dfa.letter_names->push_back("r");
    }
    // b_m: during initialisation (c = 0), set sigma bit m-1.
    for (std::uint32_t m = 1; m <= n; ++m) {
        std::vector<StateId> row(N);
        const StateId bit = 1u << (m - 1);
        for (StateId q = 0; q < N; ++q) {
            row[q] = (q & c_bit) ? q : (q | bit);
        }
        dfa.delta.push_back(std::move(row));
        dfa.letter_names->push_back("b" + std::to_string(m));
    }
    // a_m: the bit-splitter action on sigma, active only once c = 1.
    for (std::uint32_t m = 1; m < n; ++m) {
        std::vector<StateId> row(N);
        const StateId test = 1u << (m - 1);
        const StateId flip = 1u << m;
        const StateId clear = ~(flip - 1);
        for (StateId q = 0; q < N; ++q) {
            if ((q & c_bit) && (q & test)) {
                row[q] = c_bit | (((q & sigma_mask) ^ flip) & clear & sigma_mask);
            } else {
                row[q] = q;
            }
        }
        dfa.delta.push_back(std::move(row));
        dfa.letter_names->push_back("a" + std::to_string(m));
    }

    dfa.accepting.resize(N);
    const StateId top_sigma = 1u << (n - 1);
    for (StateId q = 0; q < N; ++q) {
        dfa.accepting[q] = (q & c_bit) && (q & top_sigma);
    }
    dfa.initial = 0;
    return dfa;
}

Dfa gen_cycle(std::uint32_t n, std::uint64_t max_states) {
    if (n < 2) throw std::invalid_argument("gen_cycle: n must be at least 2");
    if (n > 85) throw ResourceError("gen_cycle: state count overflows");
    const std::uint64_t states = cycle_fib(n);
    check_budget(states, max_states, "gen_cycle");
    if (states > kNoState) throw ResourceError("gen_cycle: state count exceeds the id space");
    const StateId N = static_cast<StateId>(states);

    // Letters a_0..a_m with m = max(ceil(log10 N), 1).
    std::uint32_t ceil_log10 = 0;
    for (std::uint64_t p = 1; p < states; p *= 10) ++ceil_log10;
    const LetterId m = std::max<std::uint32_t>(ceil_log10, 1);

    Dfa dfa;
    dfa.num_states = N;
    dfa.alphabet_size = m + 1;
    dfa.delta.reserve(m + 1);
    for (LetterId j = 0; j <= m; ++j) {
        const StateId step = static_cast<StateId>((static_cast<std::uint64_t>(j) * 100 + 1) % states);
        std::vector<StateId> row(N);
        for (StateId q = 0; q < N; ++q) {
            StateId t = q + step;
            if (t >= N) t -= N;
            row[q] = t;
        }
        dfa.delta.push_back(std::move(row));
    }
    dfa.accepting.assign(N, false);
    dfa.accepting[static_cast<StateId>(cycle_fib(n - 1))] = true;
    dfa.initial = 0;
    return dfa;
}

Dfa gen_memory_perfect(std::uint32_t n, std::uint64_t max_states) {
    if (n < 1) throw std::invalid_argument("gen_memory_perfect: depth must be at least 1");
    if (n >= 32) throw ResourceError("gen_memory_perfect: 2^" + std::to_string(n) + " states overflow");
    const std::uint64_t states = 1ull << n;
    check_budget(states, max_states, "gen_memory_perfect");
    const StateId N = static_cast<StateId>(states);
    const StateId mask = N - 1;

    Dfa dfa;
    dfa.num_states = N;
    dfa.alphabet_size = 2;
    dfa.delta.reserve(2);
    for (StateId v = 0; v < 2; ++v) {
        std::vector<StateId> row(N);
        for (StateId q = 0; q < N; ++q) row[q] = ((q << 1) | v) & mask;
        dfa.delta.push_back(std::move(row));
    }
    dfa.accepting.resize(N);
    for (StateId q = 0; q < N; ++q) dfa.accepting[q] = (q >> (n - 1)) & 1u;
    dfa.initial = 0;
    dfa.letter_names = std::vector<std::string>{"f", "t"};
    return dfa;
}

Dfa gen_memory_forgetful(std::uint32_t n, std::uint64_t max_states) {
    if (n < 2) throw std::invalid_argument("gen_memory_forgetful: depth must be at least 2");
    Dfa dfa = gen_memory_perfect(n, max_states);
    const StateId N = dfa.num_states;
    // States with top bits "10" forget: their outgoing transitions behave
    // as if leaving the all-zero state.
    const StateId top = 1u << (n - 1);
    const StateId second = 1u << (n - 2);
    for (StateId v = 0; v < 2; ++v) {
        for (StateId q = 0; q < N; ++q) {
            if ((q & top) && !(q & second)) dfa.delta[v][q] = v;
        }
    }
    return dfa;
}

Dfa gen_random_dfa(StateId n, LetterId k, double accept_fraction, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_random_dfa: need at least one state");
    if (k < 1) throw std::invalid_argument("gen_random_dfa: need at least one letter");
    if (accept_fraction < 0.0 || accept_fraction > 1.0) {
        throw std::invalid_argument("gen_random_dfa: accept_fraction must be in [0, 1]");
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<StateId> pick_state(0, n - 1);
    std::bernoulli_distribution pick_accept(accept_fraction);

    Dfa dfa;
    dfa.num_states = n;
    dfa.alphabet_size = k;
    dfa.delta.assign(k, std::vector<StateId>(n));
    for (LetterId a = 0; a < k; ++a) {
        for (StateId q = 0; q < n; ++q) dfa.delta[a][q] = pick_state(rng);
    }
    dfa.accepting.resize(n);
    for (StateId q = 0; q < n; ++q) dfa.accepting[q] = pick_accept(rng);
    dfa.initial = 0;
    return dfa;
}

} // namespace dfakit
