#include "dfakit/minimize.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <random>
#include <unordered_map>

#include "dfakit/errors.hpp"

namespace dfakit {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::moore: return "moore";
        case Algorithm::trans: return "trans";
        case Algorithm::naive_pr: return "naive";
        case Algorithm::naive_pr_fused: return "naive-fused";
        case Algorithm::sort_pr: return "sort";
        case Algorithm::trans_pr: return "transpr";
    }
    return "?";
}

namespace {

struct SigHash {
    std::size_t operator()(const std::vector<StateId>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (StateId x : v) {
            h ^= x;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

} // namespace

RefinementReport moore_minimize(const Dfa& dfa) {
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;

    RefinementReport report;
    report.algorithm = Algorithm::moore;
    if (n == 0) return report;

    std::vector<StateId> block(n);
    StateId num_blocks;
    {
        // Initial split: accepting vs non-accepting, ids by first occurrence.
        StateId ids[2] = {kNoState, kNoState};
        StateId next = 0;
        for (StateId q = 0; q < n; ++q) {
            int c = dfa.accepting[q] ? 1 : 0;
            if (ids[c] == kNoState) ids[c] = next++;
            block[q] = ids[c];
        }
        num_blocks = next;
    }

    std::vector<StateId> next_block(n);
    std::vector<StateId> sig(k + 1);
    while (true) {
        std::unordered_map<std::vector<StateId>, StateId, SigHash> seen;
        seen.reserve(num_blocks * 2);
        StateId next = 0;
        for (StateId q = 0; q < n; ++q) {
            sig[0] = block[q];
            for (LetterId a = 0; a < k; ++a) sig[a + 1] = block[dfa.delta[a][q]];
            auto [it, fresh] = seen.try_emplace(sig, next);
            if (fresh) ++next;
            next_block[q] = it->second;
        }
        if (next == num_blocks) break;
        block.swap(next_block);
        num_blocks = next;
        ++report.refining_iterations;
    }

    report.partition.block_of = std::move(block);
    report.partition.num_blocks = num_blocks;
    return report;
}

// ---------------------------------------------------------------------------
// trans: pair-graph reachability closure.
// ---------------------------------------------------------------------------

TransResult trans_minimize(const Dfa& dfa, std::uint64_t max_pair_nodes) {
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;
    const std::uint64_t nodes = static_cast<std::uint64_t>(n) * n;
    if (nodes > max_pair_nodes) {
        const double mib = static_cast<double>(nodes) * static_cast<double>(nodes) / 8.0 / (1 << 20);
        char need[64];
        std::snprintf(need, sizeof need, "%.1f MiB", mib);
        throw ResourceError("trans_minimize: " + std::to_string(nodes) + " pair nodes need " + need +
                            " of reachability matrix; budget is " + std::to_string(max_pair_nodes) +
                            " pair nodes");
    }

    const std::size_t V = static_cast<std::size_t>(nodes);
    const std::size_t W = (V + 63) / 64;

    std::vector<std::uint64_t> reach(V * W, 0);
    std::vector<std::uint64_t> next(V * W, 0);
    std::vector<std::uint64_t> apart(W, 0);
    auto set_bit = [](std::vector<std::uint64_t>& bits, std::size_t base, std::size_t i) {
        bits[base + (i >> 6)] |= 1ull << (i & 63);
    };
    auto get_bit = [](const std::vector<std::uint64_t>& bits, std::size_t base, std::size_t i) {
        return (bits[base + (i >> 6)] >> (i & 63)) & 1u;
    };

    for (StateId q = 0; q < n; ++q) {
        for (StateId r = 0; r < n; ++r) {
            std::size_t s = static_cast<std::size_t>(q) * n + r;
            if (dfa.accepting[q] != dfa.accepting[r]) set_bit(apart, 0, s);
            for (LetterId a = 0; a < k; ++a) {
                set_bit(reach, s * W, static_cast<std::size_t>(dfa.delta[a][q]) * n + dfa.delta[a][r]);
            }
        }
    }

    RefinementReport report;
    report.algorithm = Algorithm::trans;

    // Rows whose bit set grew in the previous pass; everything "changed"
    // before the first pass.
    std::vector<std::uint64_t> row_changed(W, ~0ull);
    std::vector<std::uint64_t> row_changed_next(W, 0);
    std::vector<std::uint64_t> new_apart(W, 0);

    if (n > 0) {
        while (true) {
            ++report.closure_iterations;

            // Reach := Reach | Reach.Reach, out of place so every pass sees the
            // pass-start matrix. A row can only grow if one of its target rows
            // grew last pass.
            std::fill(row_changed_next.begin(), row_changed_next.end(), 0);
            for (std::size_t s = 0; s < V; ++s) {
                const std::size_t base = s * W;
                bool touch = false;
                for (std::size_t w = 0; w < W && !touch; ++w) {
                    if (reach[base + w] & row_changed[w]) touch = true;
                }
                if (!touch) {
                    std::memcpy(&next[base], &reach[base], W * sizeof(std::uint64_t));
                    continue;
                }
                std::memcpy(&next[base], &reach[base], W * sizeof(std::uint64_t));
                for (std::size_t w = 0; w < W; ++w) {
                    std::uint64_t bits = reach[base + w];
                    while (bits) {
                        std::size_t t = (w << 6) + static_cast<std::size_t>(std::countr_zero(bits));
                        bits &= bits - 1;
                        const std::size_t tbase = t * W;
                        for (std::size_t v = 0; v < W; ++v) next[base + v] |= reach[tbase + v];
                    }
                }
                bool grew = false;
                for (std::size_t w = 0; w < W; ++w) {
                    if (next[base + w] != reach[base + w]) {
                        grew = true;
                        break;
                    }
                }
                if (grew) row_changed_next[s >> 6] |= 1ull << (s & 63);
            }
            reach.swap(next);
            row_changed.swap(row_changed_next);

            // One apartness propagation step: a pair becomes apart when it
            // reaches an apart pair.
            std::fill(new_apart.begin(), new_apart.end(), 0);
            bool changed = false;
            for (std::size_t s = 0; s < V; ++s) {
                if (get_bit(apart, 0, s)) continue;
                const std::size_t base = s * W;
                for (std::size_t w = 0; w < W; ++w) {
                    if (reach[base + w] & apart[w]) {
                        new_apart[s >> 6] |= 1ull << (s & 63);
                        changed = true;
                        break;
                    }
                }
            }
            if (!changed) break;
            ++report.refining_iterations;
            for (std::size_t w = 0; w < W; ++w) apart[w] |= new_apart[w];
        }
    }

    ApartMatrix matrix(n);
    for (StateId q = 0; q < n; ++q) {
        for (StateId r = q + 1; r < n; ++r) {
            if (get_bit(apart, 0, static_cast<std::size_t>(q) * n + r)) matrix.set_apart(q, r);
        }
    }
    report.partition = partition_from_apart(matrix);
    return {std::move(report), std::move(matrix)};
}

// ---------------------------------------------------------------------------
// naivePR: leader election refinement. Both variants evaluate split
// conditions against the pass-start partition; they differ only in how the
// election and the reassignment interleave.
// ---------------------------------------------------------------------------

namespace {

struct LeaderRefiner {
    const Dfa& dfa;
    std::vector<StateId> block;     // leader state id per state
    std::vector<StateId> new_leader; // per-leader slot, kNoState when free
    std::vector<StateId> touched;    // slots to reset after the pass
    std::vector<std::pair<StateId, StateId>> split; // (state, its pass-start leader)

    explicit LeaderRefiner(const Dfa& d) : dfa(d), new_leader(d.num_states, kNoState) {}

    // True when the degenerate accepting sets (F empty or F = Q) force the
    // one-block partition; no leaders can be selected then.
    bool init_blocks() {
        const StateId n = dfa.num_states;
        StateId qf = kNoState, qn = kNoState;
        for (StateId q = 0; q < n && (qf == kNoState || qn == kNoState); ++q) {
            StateId& slot = dfa.accepting[q] ? qf : qn;
            if (slot == kNoState) slot = q;
        }
        if (qf == kNoState || qn == kNoState) return false;
        block.resize(n);
        for (StateId q = 0; q < n; ++q) block[q] = dfa.accepting[q] ? qf : qn;
        return true;
    }

    // Collects all states that disagree with their leader on some letter,
    // reading only the pass-start partition.
    void collect_split_set() {
        split.clear();
        const StateId n = dfa.num_states;
        const LetterId k = dfa.alphabet_size;
        for (StateId q = 0; q < n; ++q) {
            const StateId leader = block[q];
            if (leader == q) continue;
            for (LetterId a = 0; a < k; ++a) {
                if (block[dfa.delta[a][q]] != block[dfa.delta[a][leader]]) {
                    split.emplace_back(q, leader);
                    break;
                }
            }
        }
    }

    void reset_slots() {
        for (StateId slot : touched) new_leader[slot] = kNoState;
        touched.clear();
    }
};

} // namespace

RefinementReport naive_pr(const Dfa& dfa, const ElectionPolicy& policy) {
    RefinementReport report;
    report.algorithm = Algorithm::naive_pr;

    LeaderRefiner ref(dfa);
    if (!ref.init_blocks()) {
        report.partition = Partition::single_block(dfa.num_states);
        return report;
    }

    std::mt19937_64 rng(policy.seed);
    std::vector<StateId> writer_count(dfa.num_states, 0);

    while (true) {
        ref.collect_split_set();
        if (ref.split.empty()) break;
        ++report.refining_iterations;

        // Election pass: one concurrent-write winner per leader slot.
        if (policy.kind == ElectionPolicy::Kind::min_index) {
            for (auto [q, leader] : ref.split) {
                if (ref.new_leader[leader] == kNoState) {
                    ref.new_leader[leader] = q;
                    ref.touched.push_back(leader);
                }
            }
        } else {
            // Reservoir sampling: uniform over each slot's writers.
            for (auto [q, leader] : ref.split) {
                if (ref.new_leader[leader] == kNoState) {
                    ref.new_leader[leader] = q;
                    ref.touched.push_back(leader);
                    writer_count[leader] = 1;
                } else {
                    ++writer_count[leader];
                    std::uniform_int_distribution<StateId> pick(0, writer_count[leader] - 1);
                    if (pick(rng) == 0) ref.new_leader[leader] = q;
                }
            }
        }

        // Split pass: every disagreeing state moves to the elected leader.
        for (auto [q, leader] : ref.split) ref.block[q] = ref.new_leader[leader];
        ref.reset_slots();
    }

    report.partition = Partition::from_labels(ref.block);
    return report;
}

RefinementReport naive_pr_fused(const Dfa& dfa) {
    RefinementReport report;
    report.algorithm = Algorithm::naive_pr_fused;

    LeaderRefiner ref(dfa);
    if (!ref.init_blocks()) {
        report.partition = Partition::single_block(dfa.num_states);
        return report;
    }

    while (true) {
        ref.collect_split_set();
        if (ref.split.empty()) break;
        ++report.refining_iterations;

        // Single fused pass: the first differing state claims the slot and
        // becomes the new leader, later ones follow it.
        for (auto [q, leader] : ref.split) {
            StateId claimed = ref.new_leader[leader];
            if (claimed == kNoState) {
                ref.new_leader[leader] = q;
                ref.touched.push_back(leader);
                ref.block[q] = q;
            } else {
                ref.block[q] = claimed;
            }
        }
        ref.reset_slots();
    }

    report.partition = Partition::from_labels(ref.block);
    return report;
}

// ---------------------------------------------------------------------------
// sortPR: signature sorting refinement.
// ---------------------------------------------------------------------------

RefinementReport sort_pr(const Dfa& dfa) {
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;

    RefinementReport report;
    report.algorithm = Algorithm::sort_pr;
    if (n == 0) return report;

    std::vector<StateId> block(n);
    bool any_acc = false, any_rej = false;
    for (StateId q = 0; q < n; ++q) {
        block[q] = dfa.accepting[q] ? 0 : 1;
        (dfa.accepting[q] ? any_acc : any_rej) = true;
    }
    StateId num_blocks = (any_acc && any_rej) ? 2 : 1;

    std::vector<StateId> state(n);
    std::iota(state.begin(), state.end(), 0);
    std::vector<StateId> signature(static_cast<std::size_t>(n) * k);
    std::vector<StateId> new_block(n);

    while (true) {
        for (StateId q = 0; q < n; ++q) {
            for (LetterId a = 0; a < k; ++a) {
                signature[static_cast<std::size_t>(q) * k + a] = block[dfa.delta[a][q]];
            }
        }

        // Order: current block first, then the signature letter by letter.
        auto compare = [&](StateId q1, StateId q2) {
            if (block[q1] != block[q2]) return block[q1] < block[q2];
            const StateId* s1 = &signature[static_cast<std::size_t>(q1) * k];
            const StateId* s2 = &signature[static_cast<std::size_t>(q2) * k];
            for (LetterId a = 0; a < k; ++a) {
                if (s1[a] != s2[a]) return s1[a] < s2[a];
            }
            return false;
        };
        std::stable_sort(state.begin(), state.end(), compare);

        auto are_neq = [&](StateId q1, StateId q2) {
            if (block[q1] != block[q2]) return true;
            const StateId* s1 = &signature[static_cast<std::size_t>(q1) * k];
            const StateId* s2 = &signature[static_cast<std::size_t>(q2) * k];
            for (LetterId a = 0; a < k; ++a) {
                if (s1[a] != s2[a]) return true;
            }
            return false;
        };

        // Adjacent difference then inclusive scan: dense new block ids in
        // sorted order.
        new_block[0] = 0;
        for (StateId i = 1; i < n; ++i) new_block[i] = are_neq(state[i], state[i - 1]) ? 1 : 0;
        for (StateId i = 1; i < n; ++i) new_block[i] += new_block[i - 1];

        StateId new_count = new_block[n - 1] + 1;
        if (new_count == num_blocks) break;
        for (StateId i = 0; i < n; ++i) block[state[i]] = new_block[i];
        num_blocks = new_count;
        ++report.refining_iterations;
    }

    report.partition = Partition::from_labels(block);
    return report;
}

// ---------------------------------------------------------------------------
// transPR: pointer-doubling closure alphabet, then naivePR.
// ---------------------------------------------------------------------------

namespace {

std::uint32_t floor_log2(StateId n) {
    return n <= 1 ? 0 : 31 - static_cast<std::uint32_t>(std::countl_zero(n));
}

} // namespace

Dfa build_transitive_alphabet(const Dfa& dfa, std::uint64_t max_transitions) {
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;
    const std::uint32_t levels = floor_log2(n) + 1; // powers 2^0 .. 2^floor(log2 n)

    const std::uint64_t total = static_cast<std::uint64_t>(k) * levels * n;
    if (total > max_transitions) {
        throw ResourceError("build_transitive_alphabet: doubled alphabet needs " +
                            std::to_string(total) + " transition entries; budget is " +
                            std::to_string(max_transitions));
    }

    Dfa out;
    out.num_states = n;
    out.alphabet_size = k * levels;
    out.accepting = dfa.accepting;
    out.initial = dfa.initial;
    out.delta.reserve(out.alphabet_size);
    out.letter_names.emplace();
    out.letter_names->reserve(out.alphabet_size);

    for (LetterId a = 0; a < k; ++a) {
        std::string base = dfa.letter_names ? (*dfa.letter_names)[a]
                         : (k == 1 ? std::string("a") : "a" + std::to_string(a));
        out.delta.push_back(dfa.delta[a]);
        out.letter_names->push_back(base + "^1");
        std::uint64_t power = 1;
        for (std::uint32_t i = 1; i < levels; ++i) {
            const auto& prev = out.delta.back();
            std::vector<StateId> doubled(n);
            for (StateId q = 0; q < n; ++q) doubled[q] = prev[prev[q]];
            out.delta.push_back(std::move(doubled));
            power *= 2;
            out.letter_names->push_back(base + "^" + std::to_string(power));
        }
    }
    return out;
}

RefinementReport trans_pr(const Dfa& dfa, const ElectionPolicy& policy, std::uint64_t max_transitions) {
    Dfa closed = build_transitive_alphabet(dfa, max_transitions);
    RefinementReport report = naive_pr(closed, policy);
    report.algorithm = Algorithm::trans_pr;
    report.closure_iterations = floor_log2(dfa.num_states);
    return report;
}

} // namespace dfakit
