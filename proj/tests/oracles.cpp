#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

namespace dfakit::testing {

Partition pairwise_apart_partition(const Dfa& dfa) {
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;

    std::vector<std::vector<std::vector<StateId>>> pred(k, std::vector<std::vector<StateId>>(n));
    for (LetterId a = 0; a < k; ++a) {
        for (StateId q = 0; q < n; ++q) pred[a][dfa.delta[a][q]].push_back(q);
    }

    std::vector<bool> apart(static_cast<std::size_t>(n) * n, false);
    std::deque<std::pair<StateId, StateId>> queue;
    auto mark = [&](StateId q, StateId r) {
        std::size_t i = static_cast<std::size_t>(q) * n + r;
        if (q == r || apart[i]) return;
        apart[i] = true;
        apart[static_cast<std::size_t>(r) * n + q] = true;
        queue.emplace_back(q, r);
    };

    for (StateId q = 0; q < n; ++q) {
        for (StateId r = q + 1; r < n; ++r) {
            if (dfa.accepting[q] != dfa.accepting[r]) mark(q, r);
        }
    }
    while (!queue.empty()) {
        auto [q, r] = queue.front();
        queue.pop_front();
        for (LetterId a = 0; a < k; ++a) {
            for (StateId p : pred[a][q]) {
                for (StateId s : pred[a][r]) mark(p, s);
            }
        }
    }

    std::vector<StateId> labels(n);
    std::vector<StateId> reps;
    for (StateId q = 0; q < n; ++q) {
        StateId found = kNoState;
        for (StateId r : reps) {
            if (!apart[static_cast<std::size_t>(r) * n + q]) {
                found = r;
                break;
            }
        }
        if (found == kNoState) {
            reps.push_back(q);
            found = q;
        }
        labels[q] = found;
    }
    return Partition::from_labels(labels);
}

std::vector<bool> reachable_states(const Dfa& dfa) {
    std::vector<bool> seen(dfa.num_states, false);
    if (!dfa.initial) return seen;
    std::vector<StateId> stack{*dfa.initial};
    seen[*dfa.initial] = true;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            StateId t = dfa.delta[a][q];
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return seen;
}

std::uint32_t reachable_count(const Dfa& dfa) {
    auto seen = reachable_states(dfa);
    return static_cast<std::uint32_t>(std::count(seen.begin(), seen.end(), true));
}

bool accepts(const Dfa& dfa, const std::vector<LetterId>& word) {
    return dfa.accepting[dfa.run(*dfa.initial, word)];
}

void for_each_word(LetterId k, std::size_t max_len,
                   const std::function<void(const std::vector<LetterId>&)>& fn) {
    std::vector<LetterId> word;
    fn(word);
    if (k == 0) return;
    for (std::size_t len = 1; len <= max_len; ++len) {
        word.assign(len, 0);
        while (true) {
            fn(word);
            std::size_t i = len;
            while (i > 0 && word[i - 1] + 1 == k) word[--i] = 0;
            if (i == 0) break;
            ++word[i - 1];
        }
    }
}

std::optional<std::vector<LetterId>> product_witness(const Dfa& a, const Dfa& b, bool inclusion) {
    auto fails = [&](StateId qa, StateId qb) {
        return inclusion ? (a.accepting[qa] && !b.accepting[qb]) : (a.accepting[qa] != b.accepting[qb]);
    };

    struct Node {
        StateId qa, qb;
        std::size_t parent;
        LetterId letter;
    };
    std::vector<Node> nodes{{*a.initial, *b.initial, 0, 0}};
    std::vector<bool> seen(static_cast<std::size_t>(a.num_states) * b.num_states, false);
    seen[static_cast<std::size_t>(*a.initial) * b.num_states + *b.initial] = true;

    auto word_of = [&](std::size_t idx) {
        std::vector<LetterId> w;
        while (idx != 0) {
            w.push_back(nodes[idx].letter);
            idx = nodes[idx].parent;
        }
        std::reverse(w.begin(), w.end());
        return w;
    };

    if (fails(*a.initial, *b.initial)) return word_of(0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (LetterId l = 0; l < a.alphabet_size; ++l) {
            StateId pa = a.delta[l][nodes[i].qa];
            StateId pb = b.delta[l][nodes[i].qb];
            std::size_t key = static_cast<std::size_t>(pa) * b.num_states + pb;
            if (seen[key]) continue;
            seen[key] = true;
            nodes.push_back({pa, pb, i, l});
            if (fails(pa, pb)) return word_of(nodes.size() - 1);
        }
    }
    return std::nullopt;
}

bool lts_can_trace(const Lts& lts, const std::vector<std::string>& word) {
    std::vector<StateId> current{lts.initial};
    for (const auto& label : word) {
        std::vector<StateId> next;
        for (const auto& t : lts.transitions) {
            if (t.label != label) continue;
            for (StateId q : current) {
                if (t.from == q) {
                    next.push_back(t.to);
                    break;
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty()) return false;
        current = std::move(next);
    }
    return true;
}

Dfa shuffle_states(const Dfa& dfa, std::uint64_t seed) {
    const StateId n = dfa.num_states;
    std::vector<StateId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    Dfa out;
    out.num_states = n;
    out.alphabet_size = dfa.alphabet_size;
    out.delta.assign(dfa.alphabet_size, std::vector<StateId>(n));
    out.accepting.resize(n);
    for (StateId q = 0; q < n; ++q) {
        out.accepting[perm[q]] = dfa.accepting[q];
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            out.delta[a][perm[q]] = perm[dfa.delta[a][q]];
        }
    }
    if (dfa.initial) out.initial = perm[*dfa.initial];
    out.letter_names = dfa.letter_names;
    return out;
}

} // namespace dfakit::testing
