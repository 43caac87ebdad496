#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dfakit/generators.hpp"
#include "dfakit/io.hpp"
#include "oracles.hpp"

using namespace dfakit;
namespace fs = std::filesystem;
namespace oracle = dfakit::testing;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(DFAKIT_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("dfakit_cli_test_" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

constexpr const char* kHeader = "name,n,k,algo,output_size,refine_iters,closure_iters,mean_ms,status";

} // namespace

TEST_CASE("generate writes the requested family") {
    auto r = run_cli("generate fib --word-index 5 -o " + path_of("fib5.dfa"));
    CHECK(r.exit_code == 0);
    Dfa fib = read_dfa_file(path_of("fib5.dfa"));
    CHECK(fib.num_states == 8);
    CHECK(fib.alphabet_size == 1);

    r = run_cli("generate bitsplit --n 3 -o " + path_of("b3.dfa"));
    CHECK(r.exit_code == 0);
    Dfa b3 = read_dfa_file(path_of("b3.dfa"));
    CHECK(b3.num_states == 8);
    CHECK(b3.alphabet_size == 2);
    CHECK(validate(b3).empty());
}

TEST_CASE("generate to stdout emits only the DFA") {
    auto r = run_cli("generate fib --word-index 5");
    CHECK(r.exit_code == 0);
    CHECK(read_dfa(r.out).num_states == 8);
}

TEST_CASE("generate random is deterministic per seed") {
    run_cli("generate random --n 10 --k 2 --seed 1 -o " + path_of("r1.dfa"));
    run_cli("generate random --n 10 --k 2 --seed 1 -o " + path_of("r2.dfa"));
    std::ifstream f1(path_of("r1.dfa")), f2(path_of("r2.dfa"));
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
}

TEST_CASE("generate rejects missing parameters with a nonzero exit code") {
    auto r = run_cli("generate fib");
    CHECK(r.exit_code == 2);
    r = run_cli("generate nosuchfamily --n 3");
    CHECK(r.exit_code == 2);
}

TEST_CASE("minimize prints one CSV record") {
    run_cli("generate bitsplit --n 10 -o " + path_of("b10.dfa"));
    auto r = run_cli("minimize " + path_of("b10.dfa") + " --algo naive --runs 2");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == kHeader);
    auto row = split_csv(lines[1]);
    REQUIRE(row.size() == 9);
    CHECK(row[0] == "b10");
    CHECK(row[1] == "1024");
    CHECK(row[2] == "9");
    CHECK(row[3] == "naive");
    CHECK(row[4] == "1024");
    CHECK(row[5] == "9");
    CHECK(row[6] == "0");
    CHECK(row[8] == "ok");
}

TEST_CASE("minimize: single-state automaton reports zero iterations") {
    Dfa one;
    one.num_states = 1;
    one.alphabet_size = 1;
    one.delta = {{0}};
    one.accepting = {true};
    one.initial = 0;
    write_dfa_file(one, path_of("one.dfa"));
    for (const char* algo : {"moore", "trans", "naive", "naive-fused", "sort", "transpr"}) {
        auto r = run_cli("minimize " + path_of("one.dfa") + " --algo " + algo + " --runs 1");
        CHECK(r.exit_code == 0);
        auto row = split_csv(lines_of(r.out).at(1));
        CHECK(row[4] == "1");
        CHECK(row[5] == "0");
    }
}

TEST_CASE("minimize accepts the arbitrary election policy and rejects unknown ones") {
    run_cli("generate bitsplit --n 8 -o " + path_of("b8.dfa"));
    auto r = run_cli("minimize " + path_of("b8.dfa") + " --algo naive --policy arbitrary --seed 5 "
                     "--runs 1");
    CHECK(r.exit_code == 0);
    auto row = split_csv(lines_of(r.out).at(1));
    CHECK(row[4] == "256");
    CHECK(row[8] == "ok");
    CHECK(run_cli("minimize " + path_of("b8.dfa") + " --algo naive --policy wat").exit_code == 2);
}

TEST_CASE("minimize --emit writes the quotient when an initial state exists") {
    run_cli("generate memory-forgetful --n 4 -o " + path_of("mf4.dfa"));
    auto r = run_cli("minimize " + path_of("mf4.dfa") + " --algo moore --runs 1 --emit " +
                     path_of("mf4.min.dfa"));
    CHECK(r.exit_code == 0);
    Dfa minimized = read_dfa_file(path_of("mf4.min.dfa"));
    auto row = split_csv(lines_of(r.out).at(1));
    // The emitted automaton is the pruned quotient, so unreachable blocks
    // may drop out.
    CHECK(minimized.num_states <= static_cast<StateId>(std::stoul(row[4])));
    CHECK(validate(minimized).empty());
}

TEST_CASE("minimize --emit writes a block listing when there is no initial state") {
    run_cli("generate bitsplit --n 3 -o " + path_of("b3b.dfa"));
    auto r = run_cli("minimize " + path_of("b3b.dfa") + " --algo naive --runs 1 --emit " +
                     path_of("b3b.blocks"));
    CHECK(r.exit_code == 0);
    std::ifstream in(path_of("b3b.blocks"));
    std::string first;
    std::getline(in, first);
    CHECK(first == "partition 8");
}

TEST_CASE("minimize reports out-of-memory for an over-budget trans run") {
    run_cli("generate fib --word-index 13 -o " + path_of("fib13.dfa")); // 377 states
    auto r = run_cli("minimize " + path_of("fib13.dfa") + " --algo trans --runs 1");
    CHECK(r.exit_code == 0);
    auto row = split_csv(lines_of(r.out).at(1));
    REQUIRE(row.size() == 9);
    CHECK(row[8] == "out-of-memory");
    CHECK(row[4].empty());
    CHECK(row[7].empty());
}

TEST_CASE("minimize reports a timeout when the budget is tiny") {
    run_cli("generate bitsplit --n 15 -o " + path_of("b15.dfa"));
    auto r = run_cli("minimize " + path_of("b15.dfa") + " --algo naive --runs 1 --timeout-s 0.001");
    CHECK(r.exit_code == 0);
    auto row = split_csv(lines_of(r.out).at(1));
    REQUIRE(row.size() == 9);
    CHECK(row[8] == "timeout");
    CHECK(row[5].empty());
}

TEST_CASE("equiv: self-equivalence exits 0 and prints stats") {
    run_cli("generate bitsplit-ext --n 5 -o " + path_of("ext5.dfa"));
    auto r = run_cli("equiv " + path_of("ext5.dfa") + " " + path_of("ext5.dfa") + " --stats");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "equivalent");
    CHECK(lines[1].find("explored_states=64") != std::string::npos);
}

TEST_CASE("include: forgetful within perfect exits 0 with 88 pairs") {
    run_cli("generate memory-forgetful --n 5 -o " + path_of("mf5.dfa"));
    run_cli("generate memory-perfect --n 5 -o " + path_of("mp5.dfa"));
    auto r = run_cli("include " + path_of("mf5.dfa") + " " + path_of("mp5.dfa") + " --stats");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    CHECK(lines[0] == "included");
    CHECK(lines[1].find("explored_states=88") != std::string::npos);
}

TEST_CASE("equiv: counterexamples exit 1 and print a checkable word") {
    run_cli("generate memory-perfect --n 3 -o " + path_of("mp3.dfa"));
    run_cli("generate memory-forgetful --n 3 -o " + path_of("mf3.dfa"));
    auto r = run_cli("equiv " + path_of("mp3.dfa") + " " + path_of("mf3.dfa"));
    CHECK(r.exit_code == 1);
    auto lines = lines_of(r.out);
    REQUIRE(!lines.empty());
    REQUIRE(lines[0].rfind("counterexample", 0) == 0);

    // Decode the letter names and replay the word on both automata.
    Dfa perfect = gen_memory_perfect(3);
    Dfa forgetful = gen_memory_forgetful(3);
    std::stringstream ss(lines[0].substr(std::string("counterexample").size()));
    std::vector<LetterId> word;
    std::string tok;
    while (ss >> tok) word.push_back(tok == "f" ? 0 : 1);
    CHECK(oracle::accepts(perfect, word) != oracle::accepts(forgetful, word));
}

TEST_CASE("equiv: words fall back to letter ids when names are absent") {
    run_cli("generate random --n 8 --k 2 --seed 3 -o " + path_of("ra.dfa"));
    run_cli("generate random --n 8 --k 2 --seed 4 -o " + path_of("rb.dfa"));
    auto r = run_cli("equiv " + path_of("ra.dfa") + " " + path_of("rb.dfa"));
    if (r.exit_code == 1) {
        auto first = lines_of(r.out).at(0);
        std::stringstream ss(first.substr(std::string("counterexample").size()));
        std::string tok;
        while (ss >> tok) {
            CHECK(tok.find_first_not_of("0123456789") == std::string::npos);
        }
    } else {
        CHECK(r.exit_code == 0);
    }
}

TEST_CASE("the memory budget environment variable is honored") {
    run_cli("generate memory-perfect --n 8 -o " + path_of("mp8.dfa"));
    std::string cmd = std::string("DFAKIT_MEM_BUDGET_MB=0.0001 ") + DFAKIT_CLI_PATH + " equiv " +
                      path_of("mp8.dfa") + " " + path_of("mp8.dfa") + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(out.find("budget") != std::string::npos);
}

TEST_CASE("equiv: operational errors exit 2") {
    run_cli("generate fib --word-index 5 -o " + path_of("f5.dfa"));
    run_cli("generate memory-perfect --n 3 -o " + path_of("mp3b.dfa"));
    auto r = run_cli("equiv " + path_of("f5.dfa") + " " + path_of("mp3b.dfa"), true);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("alphabet") != std::string::npos);
    CHECK(run_cli("equiv /nonexistent.dfa /nonexistent.dfa").exit_code == 2);
}

TEST_CASE("convert: determinizes and completes an .aut file") {
    {
        std::ofstream aut(path_of("tiny.aut"));
        aut << "des (0, 1, 2)\n(0, \"a\", 1)\n";
    }
    auto r = run_cli("convert " + path_of("tiny.aut") + " " + path_of("tiny.dfa"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("states=3") != std::string::npos);
    CHECK(r.out.find("alphabet=1") != std::string::npos);
    Dfa dfa = read_dfa_file(path_of("tiny.dfa"));
    CHECK(dfa.num_states == 3);
    CHECK(validate(dfa).empty());

    {
        std::ofstream aut(path_of("bad.aut"));
        aut << "des (0, 2, 2)\n(0, \"a\", 1)\n";
    }
    auto bad = run_cli("convert " + path_of("bad.aut") + " " + path_of("bad.dfa"), true);
    CHECK(bad.exit_code == 2);
    CHECK(bad.out.find("line") != std::string::npos);
}

TEST_CASE("bench emits one row per instance and algorithm") {
    auto r = run_cli("bench --suite bitsplit=10..12 --algos naive,sort --runs 1 -o " +
                     path_of("bench.csv"));
    CHECK(r.exit_code == 0);
    std::ifstream in(path_of("bench.csv"));
    std::stringstream ss;
    ss << in.rdbuf();
    auto lines = lines_of(ss.str());
    REQUIRE(lines.size() == 7); // header + 3 instances x 2 algorithms
    CHECK(lines[0] == kHeader);
    auto row = split_csv(lines[1]);
    CHECK(row[0] == "bitsplit_10");
    CHECK(row[3] == "naive");
    CHECK(row[5] == "9");
    // Both algorithms agree on the minimized size per instance.
    CHECK(split_csv(lines[1])[4] == split_csv(lines[2])[4]);
}

TEST_CASE("bench: all six algorithms report the same minimized size") {
    auto r = run_cli("bench --suite bitsplit=6..6 --algos moore,trans,naive,naive-fused,sort,transpr "
                     "--runs 1");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 7);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto row = split_csv(lines[i]);
        CHECK(row[4] == "64");
        CHECK(row[8] == "ok");
    }
}

TEST_CASE("bench records timeouts as rows instead of aborting") {
    auto r = run_cli("bench --suite bitsplit=15..15 --algos naive --runs 1 --timeout-s 0.001");
    CHECK(r.exit_code == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    auto row = split_csv(lines[1]);
    CHECK(row[8] == "timeout");
}
