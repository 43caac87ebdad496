#include "dfakit/dfa.hpp"

#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace dfakit {

std::vector<std::string> validate(const Dfa& dfa) {
    std::vector<std::string> violations;
    const StateId n = dfa.num_states;
    const LetterId k = dfa.alphabet_size;

    if (dfa.delta.size() != k) {
        violations.push_back("delta: expected " + std::to_string(k) + " letter rows, got " +
                             std::to_string(dfa.delta.size()));
    }
    for (LetterId a = 0; a < dfa.delta.size(); ++a) {
        const auto& row = dfa.delta[a];
        if (row.size() != n) {
            violations.push_back("delta[" + std::to_string(a) + "]: expected " + std::to_string(n) +
                                 " entries, got " + std::to_string(row.size()));
            continue;
        }
        for (StateId q = 0; q < n; ++q) {
            if (row[q] >= n) {
                violations.push_back("delta[" + std::to_string(a) + "][" + std::to_string(q) +
                                     "] out of range: " + std::to_string(row[q]));
            }
        }
    }
    if (dfa.accepting.size() != n) {
        violations.push_back("accepting: expected bitset of size " + std::to_string(n) + ", got " +
                             std::to_string(dfa.accepting.size()));
    }
    if (dfa.initial && *dfa.initial >= n) {
        violations.push_back("initial out of range: " + std::to_string(*dfa.initial));
    }
    if (dfa.letter_names && dfa.letter_names->size() != k) {
        violations.push_back("letter_names: expected " + std::to_string(k) + " entries, got " +
                             std::to_string(dfa.letter_names->size()));
    }
    return violations;
}

Partition Partition::from_labels(std::span<const StateId> labels) {
    Partition p;
    p.block_of.resize(labels.size());
    std::unordered_map<StateId, StateId> dense;
    dense.reserve(labels.size());
    for (std::size_t q = 0; q < labels.size(); ++q) {
        auto [it, fresh] = dense.try_emplace(labels[q], p.num_blocks);
        if (fresh) ++p.num_blocks;
        p.block_of[q] = it->second;
    }
    return p;
}

Partition Partition::identity(StateId n) {
    Partition p;
    p.block_of.resize(n);
    for (StateId q = 0; q < n; ++q) p.block_of[q] = q;
    p.num_blocks = n;
    return p;
}

Partition Partition::single_block(StateId n) {
    Partition p;
    p.block_of.assign(n, 0);
    p.num_blocks = n > 0 ? 1 : 0;
    return p;
}

ApartMatrix::ApartMatrix(StateId n) : n_(n) {
    std::size_t cells = static_cast<std::size_t>(n) * n;
    bits_.assign((cells + 63) / 64, 0);
}

void ApartMatrix::set_apart(StateId q, StateId r) {
    if (q == r) throw std::invalid_argument("ApartMatrix: a state cannot be apart from itself");
    std::size_t i = static_cast<std::size_t>(q) * n_ + r;
    std::size_t j = static_cast<std::size_t>(r) * n_ + q;
    bits_[i >> 6] |= 1ull << (i & 63);
    bits_[j >> 6] |= 1ull << (j & 63);
}

Dfa quotient(const Dfa& dfa, const Partition& p) {
    const StateId n = dfa.num_states;
    if (p.block_of.size() != n) {
        throw std::invalid_argument("quotient: partition covers " + std::to_string(p.block_of.size()) +
                                    " states, DFA has " + std::to_string(n));
    }

    // One representative per block (the first member).
    std::vector<StateId> rep(p.num_blocks, kNoState);
    for (StateId q = 0; q < n; ++q) {
        StateId b = p.block_of[q];
        if (b >= p.num_blocks) throw std::invalid_argument("quotient: block id out of range");
        if (rep[b] == kNoState) rep[b] = q;
        if (dfa.accepting[q] != dfa.accepting[rep[b]]) {
            throw std::invalid_argument("quotient: block " + std::to_string(b) +
                                        " mixes accepting and non-accepting states");
        }
    }

    for (StateId q = 0; q < n; ++q) {
        StateId r = rep[p.block_of[q]];
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            if (p.block_of[dfa.delta[a][q]] != p.block_of[dfa.delta[a][r]]) {
                throw std::invalid_argument("quotient: partition not closed under letter " +
                                            std::to_string(a) + " at state " + std::to_string(q));
            }
        }
    }

    Dfa out;
    out.num_states = p.num_blocks;
    out.alphabet_size = dfa.alphabet_size;
    out.delta.assign(dfa.alphabet_size, std::vector<StateId>(p.num_blocks));
    out.accepting.resize(p.num_blocks);
    for (StateId b = 0; b < p.num_blocks; ++b) {
        out.accepting[b] = dfa.accepting[rep[b]];
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            out.delta[a][b] = p.block_of[dfa.delta[a][rep[b]]];
        }
    }
    if (dfa.initial) out.initial = p.block_of[*dfa.initial];
    out.letter_names = dfa.letter_names;
    return out;
}

namespace {

// BFS numbering from the initial state, letters scanned upwards.
std::vector<StateId> bfs_numbering(const Dfa& dfa) {
    std::vector<StateId> order(dfa.num_states, kNoState);
    if (!dfa.initial) throw std::invalid_argument("automaton has no initial state");
    StateId next = 0;
    std::deque<StateId> queue{*dfa.initial};
    order[*dfa.initial] = next++;
    while (!queue.empty()) {
        StateId q = queue.front();
        queue.pop_front();
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            StateId t = dfa.delta[a][q];
            if (order[t] == kNoState) {
                order[t] = next++;
                queue.push_back(t);
            }
        }
    }
    return order;
}

} // namespace

std::pair<Dfa, std::vector<StateId>> prune_unreachable(const Dfa& dfa) {
    std::vector<StateId> order = bfs_numbering(dfa);
    StateId reached = 0;
    for (StateId q = 0; q < dfa.num_states; ++q) {
        if (order[q] != kNoState) ++reached;
    }

    Dfa out;
    out.num_states = reached;
    out.alphabet_size = dfa.alphabet_size;
    out.delta.assign(dfa.alphabet_size, std::vector<StateId>(reached));
    out.accepting.resize(reached);
    for (StateId q = 0; q < dfa.num_states; ++q) {
        if (order[q] == kNoState) continue;
        out.accepting[order[q]] = dfa.accepting[q];
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            out.delta[a][order[q]] = order[dfa.delta[a][q]];
        }
    }
    out.initial = order[*dfa.initial];
    out.letter_names = dfa.letter_names;
    return {std::move(out), std::move(order)};
}

Dfa canonical_form(const Dfa& dfa) {
    std::vector<StateId> order = bfs_numbering(dfa);
    for (StateId q = 0; q < dfa.num_states; ++q) {
        if (order[q] == kNoState) {
            throw std::invalid_argument("canonical_form: state " + std::to_string(q) +
                                        " is unreachable; prune first");
        }
    }

    Dfa out;
    out.num_states = dfa.num_states;
    out.alphabet_size = dfa.alphabet_size;
    out.delta.assign(dfa.alphabet_size, std::vector<StateId>(dfa.num_states));
    out.accepting.resize(dfa.num_states);
    for (StateId q = 0; q < dfa.num_states; ++q) {
        out.accepting[order[q]] = dfa.accepting[q];
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            out.delta[a][order[q]] = order[dfa.delta[a][q]];
        }
    }
    out.initial = order[*dfa.initial];
    out.letter_names = dfa.letter_names;
    return out;
}

Partition partition_from_apart(const ApartMatrix& m) {
    const StateId n = m.num_states();
    std::vector<StateId> labels(n);
    std::vector<StateId> reps;
    for (StateId q = 0; q < n; ++q) {
        StateId found = kNoState;
        for (StateId r : reps) {
            if (!m.apart(r, q)) {
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
    // The complement must be an equivalence relation; a mismatch here means
    // the closure that produced `m` stopped early.
    for (StateId q = 0; q < n; ++q) {
        for (StateId r = q + 1; r < n; ++r) {
            if ((labels[q] == labels[r]) == m.apart(q, r)) {
                throw std::invalid_argument("partition_from_apart: complement of apartness is not "
                                            "transitive at pair (" + std::to_string(q) + ", " +
                                            std::to_string(r) + ")");
            }
        }
    }
    return Partition::from_labels(labels);
}

} // namespace dfakit
