#include "dfakit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dfakit/errors.hpp"

namespace dfakit {

namespace {

struct LineReader {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line_no = 0;

    bool next(std::string_view& line) {
        if (pos >= text.size()) return false;
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        return true;
    }
};

// Splits off the next whitespace-separated token; empty view when exhausted.
std::string_view take_token(std::string_view& rest) {
    std::size_t b = rest.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        rest = {};
        return {};
    }
    std::size_t e = rest.find_first_of(" \t\r", b);
    std::string_view tok = rest.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b);
    rest = e == std::string_view::npos ? std::string_view{} : rest.substr(e);
    return tok;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty()) {
        throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
    }
    return value;
}

std::string_view expect_line(LineReader& in, const char* keyword) {
    std::string_view line;
    if (!in.next(line)) throw ParseError(in.line_no + 1, std::string("missing '") + keyword + "' line");
    std::string_view rest = line;
    std::string_view head = take_token(rest);
    if (head != keyword) {
        throw ParseError(in.line_no, std::string("expected '") + keyword + "', got '" + std::string(head) + "'");
    }
    return rest;
}

} // namespace

Dfa read_dfa(std::string_view text) {
    LineReader in{text};

    std::string_view rest = expect_line(in, "dfa");
    if (parse_uint(take_token(rest), in.line_no, "format version") != 1) {
        throw ParseError(in.line_no, "unsupported format version");
    }

    Dfa dfa;
    rest = expect_line(in, "states");
    std::uint64_t n = parse_uint(take_token(rest), in.line_no, "state count");
    if (n > kNoState) throw ParseError(in.line_no, "state count too large");
    dfa.num_states = static_cast<StateId>(n);

    rest = expect_line(in, "alphabet");
    std::uint64_t k = parse_uint(take_token(rest), in.line_no, "alphabet size");
    if (k > kNoState) throw ParseError(in.line_no, "alphabet size too large");
    dfa.alphabet_size = static_cast<LetterId>(k);

    rest = expect_line(in, "initial");
    std::string_view init_tok = take_token(rest);
    if (init_tok == "-") {
        dfa.initial.reset();
    } else {
        std::uint64_t q0 = parse_uint(init_tok, in.line_no, "initial state or '-'");
        if (q0 >= n) throw ParseError(in.line_no, "initial state out of range");
        dfa.initial = static_cast<StateId>(q0);
    }

    rest = expect_line(in, "accepting");
    std::uint64_t m = parse_uint(take_token(rest), in.line_no, "accepting count");
    dfa.accepting.assign(dfa.num_states, false);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        std::uint64_t id = parse_uint(take_token(rest), in.line_no, "accepting state id");
        if (id >= n) throw ParseError(in.line_no, "accepting state out of range");
        if (i > 0 && id <= prev) throw ParseError(in.line_no, "accepting ids must be strictly increasing");
        dfa.accepting[static_cast<StateId>(id)] = true;
        prev = id;
    }
    if (!take_token(rest).empty()) throw ParseError(in.line_no, "trailing data after accepting ids");

    // Optional letter-name block, then the transition rows.
    std::string_view line;
    bool have_line = in.next(line);
    if (have_line) {
        std::string_view peek_rest = line;
        if (take_token(peek_rest) == "letter") {
            dfa.letter_names.emplace();
            for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
                if (a > 0 && !in.next(line)) throw ParseError(in.line_no + 1, "missing letter line");
                std::string_view r = line;
                if (take_token(r) != "letter") throw ParseError(in.line_no, "expected letter line");
                if (parse_uint(take_token(r), in.line_no, "letter id") != a) {
                    throw ParseError(in.line_no, "letter lines must be in ascending order");
                }
                // The name is the remainder of the line, separators trimmed on
                // the left only so names may contain internal spaces.
                if (!r.empty() && (r.front() == ' ' || r.front() == '\t')) r.remove_prefix(1);
                while (!r.empty() && r.back() == '\r') r.remove_suffix(1);
                dfa.letter_names->emplace_back(r);
            }
            have_line = in.next(line);
        }
    }

    dfa.delta.assign(dfa.alphabet_size, {});
    for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
        if (a > 0 || !have_line) {
            if (!in.next(line)) throw ParseError(in.line_no + 1, "missing trans line");
        }
        std::string_view r = line;
        if (take_token(r) != "trans") throw ParseError(in.line_no, "expected trans line");
        if (parse_uint(take_token(r), in.line_no, "letter id") != a) {
            throw ParseError(in.line_no, "trans lines must be in ascending letter order");
        }
        auto& row = dfa.delta[a];
        row.reserve(dfa.num_states);
        for (StateId q = 0; q < dfa.num_states; ++q) {
            std::uint64_t t = parse_uint(take_token(r), in.line_no, "transition target");
            if (t >= n) throw ParseError(in.line_no, "transition target out of range");
            row.push_back(static_cast<StateId>(t));
        }
        if (!take_token(r).empty()) {
            throw ParseError(in.line_no, "trans row longer than declared state count");
        }
        have_line = false;
    }

    if (have_line) {
        std::string_view r = line;
        if (!take_token(r).empty()) throw ParseError(in.line_no, "unexpected trailing line");
    }
    while (in.next(line)) {
        std::string_view r = line;
        if (!take_token(r).empty()) throw ParseError(in.line_no, "unexpected trailing line");
    }
    return dfa;
}

std::string write_dfa(const Dfa& dfa) {
    std::ostringstream out;
    out << "dfa 1\n";
    out << "states " << dfa.num_states << "\n";
    out << "alphabet " << dfa.alphabet_size << "\n";
    if (dfa.initial) {
        out << "initial " << *dfa.initial << "\n";
    } else {
        out << "initial -\n";
    }
    std::size_t m = 0;
    for (StateId q = 0; q < dfa.num_states; ++q) m += dfa.accepting[q] ? 1 : 0;
    out << "accepting " << m;
    for (StateId q = 0; q < dfa.num_states; ++q) {
        if (dfa.accepting[q]) out << " " << q;
    }
    out << "\n";
    if (dfa.letter_names) {
        for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
            out << "letter " << a << " " << (*dfa.letter_names)[a] << "\n";
        }
    }
    for (LetterId a = 0; a < dfa.alphabet_size; ++a) {
        out << "trans " << a;
        for (StateId q = 0; q < dfa.num_states; ++q) out << " " << dfa.delta[a][q];
        out << "\n";
    }
    return std::move(out).str();
}

Dfa read_dfa_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_dfa(buf.str());
}

void write_dfa_file(const Dfa& dfa, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << write_dfa(dfa);
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace dfakit
