#include "dfakit/lts.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "dfakit/errors.hpp"

namespace dfakit {

namespace {

std::string_view trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
    tok = trim(tok);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return value;
}

} // namespace

Lts load_aut(std::string_view text) {
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&](std::string_view& line) {
        while (pos < text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (!trim(line).empty()) return true;
        }
        return false;
    };

    std::string_view line;
    if (!next_line(line)) throw ParseError(1, "empty file, expected 'des (...)' header");
    std::string_view header = trim(line);
    if (!header.starts_with("des")) throw ParseError(line_no, "expected 'des (...)' header");
    header.remove_prefix(3);
    header = trim(header);
    if (header.empty() || header.front() != '(' || header.back() != ')') {
        throw ParseError(line_no, "malformed header, expected des (<initial>, <transitions>, <states>)");
    }
    header = header.substr(1, header.size() - 2);
    std::size_t c1 = header.find(',');
    std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos : header.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(line_no, "header needs three comma-separated fields");

    Lts lts;
    std::uint64_t initial = parse_uint(header.substr(0, c1), line_no, "initial state");
    std::uint64_t num_trans = parse_uint(header.substr(c1 + 1, c2 - c1 - 1), line_no, "transition count");
    std::uint64_t num_states = parse_uint(header.substr(c2 + 1), line_no, "state count");
    if (num_states > kNoState) throw ParseError(line_no, "state count too large");
    if (initial >= num_states) throw ParseError(line_no, "initial state out of range");
    lts.num_states = static_cast<StateId>(num_states);
    lts.initial = static_cast<StateId>(initial);
    lts.transitions.reserve(num_trans);

    for (std::uint64_t i = 0; i < num_trans; ++i) {
        if (!next_line(line)) {
            throw ParseError(line_no + 1, "transition count mismatch: header declares " +
                             std::to_string(num_trans) + ", found " + std::to_string(i));
        }
        std::string_view body = trim(line);
        if (body.empty() || body.front() != '(' || body.back() != ')') {
            throw ParseError(line_no, "expected (<from>, <label>, <to>)");
        }
        body = body.substr(1, body.size() - 2);

        std::size_t first_comma = body.find(',');
        if (first_comma == std::string_view::npos) throw ParseError(line_no, "missing label field");
        std::uint64_t from = parse_uint(body.substr(0, first_comma), line_no, "source state");

        std::string_view rest = trim(body.substr(first_comma + 1));
        std::string label;
        std::string_view to_part;
        if (!rest.empty() && rest.front() == '"') {
            std::size_t close = rest.find('"', 1);
            if (close == std::string_view::npos) throw ParseError(line_no, "unterminated label quote");
            label = std::string(rest.substr(1, close - 1));
            to_part = trim(rest.substr(close + 1));
            if (to_part.empty() || to_part.front() != ',') throw ParseError(line_no, "missing target field");
            to_part.remove_prefix(1);
        } else {
            // Bare label: the target is everything after the last comma.
            std::size_t last_comma = rest.rfind(',');
            if (last_comma == std::string_view::npos) throw ParseError(line_no, "missing target field");
            label = std::string(trim(rest.substr(0, last_comma)));
            to_part = rest.substr(last_comma + 1);
        }
        std::uint64_t to = parse_uint(to_part, line_no, "target state");
        if (from >= num_states || to >= num_states) throw ParseError(line_no, "state id out of range");
        lts.transitions.push_back({static_cast<StateId>(from), std::move(label), static_cast<StateId>(to)});
    }

    if (next_line(line)) throw ParseError(line_no, "transition count mismatch: extra transition lines");
    return lts;
}

namespace {

struct SubsetHash {
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

Lts determinize(const Lts& lts, const DeterminizeOptions& opts) {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(opts.timeout_s));

    // Labels in first-appearance order.
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> label_idx;
    for (const auto& t : lts.transitions) {
        if (label_idx.emplace(t.label, labels.size()).second) labels.push_back(t.label);
    }

    // Per-state, per-label target lists.
    std::vector<std::map<std::size_t, std::vector<StateId>>> succ(lts.num_states);
    for (const auto& t : lts.transitions) {
        succ[t.from][label_idx.at(t.label)].push_back(t.to);
    }

    std::unordered_map<std::vector<StateId>, StateId, SubsetHash> subset_id;
    std::vector<std::vector<StateId>> subsets;
    auto intern = [&](std::vector<StateId> subset) {
        auto [it, fresh] = subset_id.try_emplace(std::move(subset), static_cast<StateId>(subsets.size()));
        if (fresh) {
            if (subsets.size() >= opts.max_states) {
                throw ResourceError("determinize: subset construction exceeded the budget of " +
                                    std::to_string(opts.max_states) + " states");
            }
            subsets.push_back(it->first);
        }
        return std::pair{it->second, fresh};
    };

    Lts out;
    out.initial = 0;
    intern({lts.initial});
    std::deque<StateId> queue{0};
    while (!queue.empty()) {
        if (std::chrono::steady_clock::now() > deadline) {
            throw ResourceError("determinize: time budget of " + std::to_string(opts.timeout_s) +
                                " s exceeded after " + std::to_string(subsets.size()) + " subset states");
        }
        StateId sid = queue.front();
        queue.pop_front();
        const std::vector<StateId> members = subsets[sid];

        for (std::size_t l = 0; l < labels.size(); ++l) {
            std::vector<StateId> targets;
            for (StateId q : members) {
                auto it = succ[q].find(l);
                if (it != succ[q].end()) targets.insert(targets.end(), it->second.begin(), it->second.end());
            }
            if (targets.empty()) continue;
            std::sort(targets.begin(), targets.end());
            targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
            auto [tid, fresh] = intern(std::move(targets));
            if (fresh) queue.push_back(tid);
            out.transitions.push_back({sid, labels[l], tid});
        }
    }
    out.num_states = static_cast<StateId>(subsets.size());
    return out;
}

Dfa complete_to_dfa(const Lts& deterministic) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, LetterId> label_idx;
    for (const auto& t : deterministic.transitions) {
        if (label_idx.emplace(t.label, static_cast<LetterId>(labels.size())).second) {
            labels.push_back(t.label);
        }
    }

    const StateId n = deterministic.num_states;
    const StateId sink = n;
    const LetterId k = static_cast<LetterId>(labels.size());

    Dfa dfa;
    dfa.num_states = n + 1;
    dfa.alphabet_size = k;
    dfa.delta.assign(k, std::vector<StateId>(n + 1, sink));
    for (const auto& t : deterministic.transitions) {
        if (t.from >= n || t.to >= n) {
            throw std::invalid_argument("complete_to_dfa: transition state id out of range");
        }
        StateId& cell = dfa.delta[label_idx.at(t.label)][t.from];
        if (cell != sink && cell != t.to) {
            throw std::invalid_argument("complete_to_dfa: input is not deterministic at state " +
                                        std::to_string(t.from) + " label '" + t.label + "'");
        }
        cell = t.to;
    }
    for (LetterId a = 0; a < k; ++a) dfa.delta[a][sink] = sink;
    dfa.accepting.assign(n + 1, true);
    dfa.accepting[sink] = false;
    dfa.initial = deterministic.initial;
    dfa.letter_names = std::move(labels);
    return dfa;
}

} // namespace dfakit
