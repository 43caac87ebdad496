#include "dfakit/equivalence.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dfakit/errors.hpp"

namespace dfakit {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Open-addressing hash set over packed (state-of-A, state-of-B) pairs;
// doubles as the BFS record store: records are kept in insertion order,
// so a wave is just an index range, and each record carries its parent
// and incoming letter for counterexample reconstruction.
class PairSet {
public:
    struct Record {
        std::uint64_t key;
        std::uint32_t parent;
        LetterId letter;
    };

    explicit PairSet(std::uint64_t max_visited)
        : max_visited_(std::min<std::uint64_t>(max_visited, (1ull << 32) - 2)) { // record indices are 32-bit
        table_.assign(kInitialCapacity, kEmpty);
        mask_ = kInitialCapacity - 1;
    }

    // Returns the index of the record, inserting if the pair is new.
    std::pair<std::uint32_t, bool> insert(std::uint64_t key, std::uint32_t parent, LetterId letter) {
        std::size_t slot = static_cast<std::size_t>(mix64(key)) & mask_;
        while (table_[slot] != kEmpty) {
            if (records_[table_[slot]].key == key) return {table_[slot], false};
            slot = (slot + 1) & mask_;
        }
        if (records_.size() >= max_visited_) {
            throw ResourceError("product exploration exceeded the visited-set budget of " +
                                std::to_string(max_visited_) + " pairs");
        }
        std::uint32_t idx = static_cast<std::uint32_t>(records_.size());
        records_.push_back({key, parent, letter});
        table_[slot] = idx;
        if (records_.size() * 2 > table_.size()) grow();
        return {idx, true};
    }

    const Record& record(std::uint32_t idx) const { return records_[idx]; }
    std::uint64_t size() const { return records_.size(); }

private:
    static constexpr std::uint32_t kEmpty = static_cast<std::uint32_t>(-1);
    static constexpr std::size_t kInitialCapacity = 1u << 10;

    void grow() {
        std::vector<std::uint32_t> bigger(table_.size() * 2, kEmpty);
        std::size_t mask = bigger.size() - 1;
        for (std::uint32_t i = 0; i < records_.size(); ++i) {
            std::size_t slot = static_cast<std::size_t>(mix64(records_[i].key)) & mask;
            while (bigger[slot] != kEmpty) slot = (slot + 1) & mask;
            bigger[slot] = i;
        }
        table_.swap(bigger);
        mask_ = mask;
    }

    std::uint64_t max_visited_;
    std::vector<std::uint32_t> table_;
    std::size_t mask_;
    std::vector<Record> records_;
};

std::uint64_t pack(StateId qa, StateId qb) {
    return (static_cast<std::uint64_t>(qa) << 32) | qb;
}

// Identity unless matching by name; maps letters of A onto letters of B.
std::vector<LetterId> letter_mapping(const Dfa& a, const Dfa& b, const ExploreOptions& opts) {
    if (!opts.match_letters_by_name) {
        if (a.alphabet_size != b.alphabet_size) {
            throw std::invalid_argument("alphabet size mismatch: " + std::to_string(a.alphabet_size) +
                                        " vs " + std::to_string(b.alphabet_size));
        }
        std::vector<LetterId> id(a.alphabet_size);
        for (LetterId i = 0; i < a.alphabet_size; ++i) id[i] = i;
        return id;
    }
    if (!a.letter_names || !b.letter_names) {
        throw std::invalid_argument("matching letters by name requires letter names on both inputs");
    }
    if (a.alphabet_size != b.alphabet_size) {
        throw std::invalid_argument("letter name sets differ in size");
    }
    std::unordered_map<std::string, LetterId> of_b;
    for (LetterId i = 0; i < b.alphabet_size; ++i) {
        if (!of_b.emplace((*b.letter_names)[i], i).second) {
            throw std::invalid_argument("duplicate letter name '" + (*b.letter_names)[i] + "'");
        }
    }
    std::vector<LetterId> map(a.alphabet_size);
    std::vector<bool> used(b.alphabet_size, false);
    for (LetterId i = 0; i < a.alphabet_size; ++i) {
        auto it = of_b.find((*a.letter_names)[i]);
        if (it == of_b.end()) {
            throw std::invalid_argument("letter '" + (*a.letter_names)[i] + "' has no counterpart");
        }
        if (used[it->second]) {
            throw std::invalid_argument("duplicate letter name '" + (*a.letter_names)[i] + "'");
        }
        used[it->second] = true;
        map[i] = it->second;
    }
    return map;
}

std::vector<LetterId> reconstruct_word(const PairSet& set, std::uint32_t idx) {
    std::vector<LetterId> word;
    while (idx != 0) {
        const auto& rec = set.record(idx);
        word.push_back(rec.letter);
        idx = rec.parent;
    }
    std::reverse(word.begin(), word.end());
    return word;
}

} // namespace

ProductResult explore_product(const Dfa& a, const Dfa& b, ExploreMode mode, const ExploreOptions& opts) {
    if (!a.initial || !b.initial) {
        throw std::invalid_argument("product exploration requires initial states on both inputs");
    }
    const std::vector<LetterId> to_b = letter_mapping(a, b, opts);
    const LetterId k = a.alphabet_size;

    // A pair fails when its acceptance statuses rule the verdict out.
    auto fails = [&](StateId qa, StateId qb) {
        bool fa = a.accepting[qa];
        bool fb = b.accepting[qb];
        return mode == ExploreMode::inclusion ? (fa && !fb) : (fa != fb);
    };

    PairSet visited(opts.max_visited);
    ProductResult result;

    auto finish_ok = [&] {
        result.verdict = mode == ExploreMode::inclusion ? Verdict::included : Verdict::equivalent;
        result.explored_states = visited.size();
        return result;
    };

    std::uint32_t first_fail = static_cast<std::uint32_t>(-1);
    visited.insert(pack(*a.initial, *b.initial), 0, 0);
    if (fails(*a.initial, *b.initial)) {
        if (mode != ExploreMode::full) {
            result.verdict = Verdict::counterexample;
            result.explored_states = 1;
            return result; // the empty word is the witness
        }
        first_fail = 0;
    }

    std::uint32_t wave_begin = 0;
    std::uint32_t wave_end = 1;
    while (wave_begin < wave_end) {
        for (std::uint32_t i = wave_begin; i < wave_end; ++i) {
            const std::uint64_t key = visited.record(i).key;
            const StateId qa = static_cast<StateId>(key >> 32);
            const StateId qb = static_cast<StateId>(key & 0xffffffffu);
            for (LetterId la = 0; la < k; ++la) {
                const StateId pa = a.delta[la][qa];
                const StateId pb = b.delta[to_b[la]][qb];
                auto [idx, fresh] = visited.insert(pack(pa, pb), i, la);
                if (!fresh) continue;
                if (fails(pa, pb)) {
                    if (mode != ExploreMode::full) {
                        result.verdict = Verdict::counterexample;
                        result.counterexample = reconstruct_word(visited, idx);
                        result.explored_states = visited.size();
                        return result;
                    }
                    if (first_fail == static_cast<std::uint32_t>(-1)) first_fail = idx;
                }
            }
        }
        ++result.levels;
        wave_begin = wave_end;
        wave_end = static_cast<std::uint32_t>(visited.size());
    }

    if (mode == ExploreMode::full && first_fail != static_cast<std::uint32_t>(-1)) {
        result.verdict = Verdict::counterexample;
        result.counterexample = reconstruct_word(visited, first_fail);
        result.explored_states = visited.size();
        return result;
    }
    return finish_ok();
}

ProductResult check_equiv(const Dfa& a, const Dfa& b, const ExploreOptions& opts) {
    return explore_product(a, b, ExploreMode::equivalence, opts);
}

ProductResult check_inclusion(const Dfa& a, const Dfa& b, const ExploreOptions& opts) {
    return explore_product(a, b, ExploreMode::inclusion, opts);
}

} // namespace dfakit
