// dfakit command-line front end: generate benchmark DFAs, run the
// minimisation algorithms and the equivalence/inclusion checkers with
// timing and iteration reporting, convert .aut files, and emit CSV
// benchmark tables.
//
// Exit codes: 0 success (equivalent/included), 1 counterexample found,
// 2 operational error (parse failure, missing file, budget exceeded).

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dfakit/dfa.hpp"
#include "dfakit/equivalence.hpp"
#include "dfakit/errors.hpp"
#include "dfakit/generators.hpp"
#include "dfakit/io.hpp"
#include "dfakit/lts.hpp"
#include "dfakit/minimize.hpp"

using namespace dfakit;

namespace {

constexpr const char* kCsvHeader = "name,n,k,algo,output_size,refine_iters,closure_iters,mean_ms,status";

struct MemBudget {
    std::optional<double> mb;

    std::uint64_t max_visited() const {
        if (!mb) return kDefaultMaxVisited;
        // ~24 bytes per visited pair: 16-byte record plus index-table share.
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(*mb * (1 << 20) / 24.0));
    }
    std::uint64_t max_pair_nodes() const {
        if (!mb) return kDefaultMaxPairNodes;
        // Two bit matrices of (pair nodes)^2 cells.
        double bits = *mb * (1 << 20) * 8.0 / 2.0;
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::sqrt(bits)));
    }
    std::uint64_t max_transitions() const {
        if (!mb) return kDefaultMaxTransitions;
        return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(*mb * (1 << 20) / 4.0));
    }
};

Dfa generate_family(const std::string& family, std::optional<std::uint32_t> word_index,
                    std::optional<std::uint32_t> n, std::uint32_t k, double accept_fraction,
                    std::uint64_t seed) {
    auto need_n = [&]() -> std::uint32_t {
        if (!n) throw std::invalid_argument("family '" + family + "' needs --n");
        return *n;
    };
    if (family == "fib") {
        if (!word_index) throw std::invalid_argument("family 'fib' needs --word-index");
        return gen_fib(*word_index);
    }
    if (family == "bitsplit") return gen_bitsplitter(need_n());
    if (family == "bitsplit-ext") return gen_bitsplitter_ext(need_n());
    if (family == "cycle") return gen_cycle(need_n());
    if (family == "memory-perfect") return gen_memory_perfect(need_n());
    if (family == "memory-forgetful") return gen_memory_forgetful(need_n());
    if (family == "random") {
        return gen_random_dfa(need_n(), k, accept_fraction, seed);
    }
    throw std::invalid_argument("unknown family '" + family + "'");
}

Algorithm parse_algo(const std::string& name) {
    if (name == "moore") return Algorithm::moore;
    if (name == "trans") return Algorithm::trans;
    if (name == "naive") return Algorithm::naive_pr;
    if (name == "naive-fused") return Algorithm::naive_pr_fused;
    if (name == "sort") return Algorithm::sort_pr;
    if (name == "transpr") return Algorithm::trans_pr;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

RefinementReport run_algorithm(const Dfa& dfa, Algorithm algo, const ElectionPolicy& policy,
                               const MemBudget& mem) {
    switch (algo) {
        case Algorithm::moore: return moore_minimize(dfa);
        case Algorithm::trans: return trans_minimize(dfa, mem.max_pair_nodes()).report;
        case Algorithm::naive_pr: return naive_pr(dfa, policy);
        case Algorithm::naive_pr_fused: return naive_pr_fused(dfa);
        case Algorithm::sort_pr: return sort_pr(dfa);
        case Algorithm::trans_pr: return trans_pr(dfa, policy, mem.max_transitions());
    }
    throw std::logic_error("unreachable");
}

struct BenchRecord {
    std::string name;
    StateId n = 0;
    LetterId k = 0;
    Algorithm algo = Algorithm::moore;
    std::optional<RefinementReport> report;
    std::optional<double> mean_ms;
    std::string status = "ok"; // ok | timeout | out-of-memory
};

void print_record(std::ostream& out, const BenchRecord& rec) {
    out << rec.name << "," << rec.n << "," << rec.k << "," << to_string(rec.algo) << ",";
    if (rec.status == "ok") {
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", *rec.mean_ms);
        out << rec.report->partition.num_blocks << "," << rec.report->refining_iterations << ","
            << rec.report->closure_iterations << "," << ms;
    } else {
        out << ",,,";
    }
    out << "," << rec.status << "\n";
}

// Runs the algorithm `runs` times in a worker thread, applying the per-run
// time budget. On timeout the worker is abandoned (it cannot be interrupted
// mid-run) and the record is marked accordingly.
BenchRecord run_benchmark(const std::string& name, std::shared_ptr<const Dfa> dfa, Algorithm algo,
                          const ElectionPolicy& policy, std::uint32_t runs, double timeout_s,
                          const MemBudget& mem) {
    struct Shared {
        std::mutex mu;
        std::condition_variable cv;
        std::uint32_t runs_done = 0;
        std::vector<double> run_ms;
        std::optional<RefinementReport> report;
        bool oom = false;
        std::string message;
        bool failed = false;
        bool finished = false;
    };
    auto sh = std::make_shared<Shared>();

    BenchRecord rec;
    rec.name = name;
    rec.n = dfa->num_states;
    rec.k = dfa->alphabet_size;
    rec.algo = algo;

    std::thread worker([sh, dfa, algo, policy, runs, mem] {
        try {
            for (std::uint32_t r = 0; r < runs; ++r) {
                auto t0 = std::chrono::steady_clock::now();
                RefinementReport report = run_algorithm(*dfa, algo, policy, mem);
                auto t1 = std::chrono::steady_clock::now();
                std::lock_guard lk(sh->mu);
                sh->run_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
                sh->report = std::move(report);
                ++sh->runs_done;
                sh->cv.notify_all();
            }
        } catch (const ResourceError& e) {
            std::lock_guard lk(sh->mu);
            sh->oom = true;
            sh->message = e.what();
        } catch (const std::exception& e) {
            std::lock_guard lk(sh->mu);
            sh->failed = true;
            sh->message = e.what();
        }
        std::lock_guard lk(sh->mu);
        sh->finished = true;
        sh->cv.notify_all();
    });

    std::unique_lock lk(sh->mu);
    for (std::uint32_t r = 0; r < runs; ++r) {
        auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(timeout_s));
        bool done = sh->cv.wait_until(lk, deadline, [&] { return sh->runs_done > r || sh->finished; });
        if (!done && sh->runs_done <= r) {
            rec.status = "timeout";
            lk.unlock();
            worker.detach();
            return rec;
        }
        if (sh->finished && sh->runs_done <= r) break;
    }
    lk.unlock();
    worker.join();

    if (sh->failed) throw std::runtime_error(sh->message);
    if (sh->oom) {
        rec.status = "out-of-memory";
        std::cerr << rec.name << ": " << sh->message << "\n";
        return rec;
    }
    double total = 0;
    for (double ms : sh->run_ms) total += ms;
    rec.mean_ms = total / sh->run_ms.size();
    rec.report = std::move(*sh->report);
    return rec;
}

std::string letter_display(const Dfa& dfa, LetterId a) {
    if (dfa.letter_names) return (*dfa.letter_names)[a];
    return std::to_string(a);
}

int report_verdict(const Dfa& a, const ProductResult& result, bool stats, const char* ok_word) {
    if (result.verdict == Verdict::counterexample) {
        std::ostringstream word;
        for (std::size_t i = 0; i < result.counterexample.size(); ++i) {
            if (i > 0) word << " ";
            word << letter_display(a, result.counterexample[i]);
        }
        std::cout << "counterexample " << word.str() << "\n";
    } else {
        std::cout << ok_word << "\n";
    }
    if (stats) {
        std::cout << "explored_states=" << result.explored_states << " levels=" << result.levels << "\n";
    }
    return result.verdict == Verdict::counterexample ? 1 : 0;
}

struct SuiteEntry {
    std::string family;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
};

SuiteEntry parse_suite(const std::string& spec) {
    auto eq = spec.find('=');
    auto dots = spec.find("..");
    if (eq == std::string::npos || dots == std::string::npos || dots < eq) {
        throw std::invalid_argument("suite spec must look like family=lo..hi, got '" + spec + "'");
    }
    SuiteEntry e;
    e.family = spec.substr(0, eq);
    e.lo = static_cast<std::uint32_t>(std::stoul(spec.substr(eq + 1, dots - eq - 1)));
    e.hi = static_cast<std::uint32_t>(std::stoul(spec.substr(dots + 2)));
    if (e.hi < e.lo) throw std::invalid_argument("suite range is empty: '" + spec + "'");
    return e;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DFA minimisation, equivalence and inclusion toolkit"};
    app.require_subcommand(1);

    MemBudget mem;
    if (const char* env = std::getenv("DFAKIT_MEM_BUDGET_MB")) {
        mem.mb = std::atof(env);
    }

    // generate
    std::string gen_family, gen_out;
    std::optional<std::uint32_t> gen_word_index, gen_n;
    std::uint32_t gen_k = 2;
    double gen_accept = 0.5;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "Generate a benchmark DFA");
    generate->add_option("family", gen_family,
                         "fib | bitsplit | bitsplit-ext | cycle | memory-perfect | memory-forgetful | random")
        ->required();
    generate->add_option("--word-index", gen_word_index, "Word index for the fib family");
    generate->add_option("--n", gen_n, "Size parameter");
    generate->add_option("--k", gen_k, "Alphabet size (random family)");
    generate->add_option("--accept-fraction", gen_accept, "Accepting probability (random family)");
    generate->add_option("--seed", gen_seed, "RNG seed (random family)");
    generate->add_option("-o,--out", gen_out, "Output path (stdout when omitted)");

    // minimize
    std::string min_in, min_algo = "naive", min_policy = "min-index", min_emit, min_name;
    std::uint64_t min_seed = 0;
    std::uint32_t min_runs = 5;
    double min_timeout = 300.0;
    std::optional<double> mem_flag;
    auto* minimize = app.add_subcommand("minimize", "Minimize a DFA and report a benchmark row");
    minimize->add_option("input", min_in, "DFA file")->required();
    minimize->add_option("--algo", min_algo, "moore | trans | naive | naive-fused | sort | transpr");
    minimize->add_option("--policy", min_policy, "min-index | arbitrary");
    minimize->add_option("--seed", min_seed, "Election seed for --policy arbitrary");
    minimize->add_option("--runs", min_runs, "Timed repetitions (default 5)");
    minimize->add_option("--timeout-s", min_timeout, "Per-run time budget in seconds (default 300)");
    minimize->add_option("--mem-budget-mb", mem_flag, "Memory budget in MiB");
    minimize->add_option("--emit", min_emit, "Write the minimized DFA (or block listing) here");
    minimize->add_option("--name", min_name, "Row name (default: input file stem)");

    // equiv / include
    std::string eq_a, eq_b;
    bool eq_stats = false, eq_by_name = false;
    auto* equiv = app.add_subcommand("equiv", "Check language equivalence of two DFAs");
    equiv->add_option("a", eq_a)->required();
    equiv->add_option("b", eq_b)->required();
    equiv->add_flag("--stats", eq_stats, "Print explored state and level counts");
    equiv->add_flag("--by-name", eq_by_name, "Match letters by name instead of position");
    equiv->add_option("--mem-budget-mb", mem_flag, "Memory budget in MiB");
    auto* include = app.add_subcommand("include", "Check language inclusion of two DFAs");
    include->add_option("a", eq_a)->required();
    include->add_option("b", eq_b)->required();
    include->add_flag("--stats", eq_stats, "Print explored state and level counts");
    include->add_flag("--by-name", eq_by_name, "Match letters by name instead of position");
    include->add_option("--mem-budget-mb", mem_flag, "Memory budget in MiB");

    // convert
    std::string conv_in, conv_out;
    double conv_timeout = 600.0;
    std::uint64_t conv_max_states = 1ull << 22;
    auto* convert = app.add_subcommand("convert", "Determinize and complete an .aut file into a DFA");
    convert->add_option("input", conv_in, ".aut file")->required();
    convert->add_option("output", conv_out, "DFA output path")->required();
    convert->add_option("--timeout-s", conv_timeout, "Determinization time budget (default 600)");
    convert->add_option("--max-subset-states", conv_max_states, "Subset construction state budget");

    // bench
    std::vector<std::string> bench_suites;
    std::string bench_algos = "naive,sort,transpr", bench_out;
    std::uint32_t bench_runs = 5;
    std::uint32_t bench_k = 2;
    double bench_timeout = 300.0;
    auto* bench = app.add_subcommand("bench", "Run a benchmark suite and emit CSV");
    bench->add_option("--suite", bench_suites, "family=lo..hi (repeatable)")->required();
    bench->add_option("--algos", bench_algos, "Comma-separated algorithm list");
    bench->add_option("--runs", bench_runs, "Timed repetitions per row (default 5)");
    bench->add_option("--timeout-s", bench_timeout, "Per-run time budget in seconds (default 300)");
    bench->add_option("--k", bench_k, "Alphabet size for the random family");
    bench->add_option("--mem-budget-mb", mem_flag, "Memory budget in MiB");
    bench->add_option("-o,--out", bench_out, "CSV output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);
    if (mem_flag) mem.mb = mem_flag;

    try {
        if (*generate) {
            Dfa dfa = generate_family(gen_family, gen_word_index, gen_n, gen_k, gen_accept, gen_seed);
            if (gen_out.empty()) {
                std::cout << write_dfa(dfa);
            } else {
                write_dfa_file(dfa, gen_out);
                std::cerr << "wrote " << gen_out << " (" << dfa.num_states << " states, "
                          << dfa.alphabet_size << " letters)\n";
            }
            return 0;
        }

        if (*minimize) {
            auto dfa = std::make_shared<const Dfa>(read_dfa_file(min_in));
            ElectionPolicy policy = ElectionPolicy::min_index();
            if (min_policy == "arbitrary") {
                policy = ElectionPolicy::arbitrary(min_seed);
            } else if (min_policy != "min-index") {
                throw std::invalid_argument("unknown policy '" + min_policy + "'");
            }
            std::string name = min_name.empty() ? std::filesystem::path(min_in).stem().string() : min_name;
            BenchRecord rec = run_benchmark(name, dfa, parse_algo(min_algo), policy, min_runs,
                                            min_timeout, mem);
            std::cout << kCsvHeader << "\n";
            print_record(std::cout, rec);

            if (!min_emit.empty() && rec.status == "ok") {
                const Partition& p = rec.report->partition;
                if (dfa->initial) {
                    auto [pruned, map] = prune_unreachable(*dfa);
                    std::vector<StateId> labels(pruned.num_states);
                    for (StateId q = 0; q < dfa->num_states; ++q) {
                        if (map[q] != kNoState) labels[map[q]] = p.block_of[q];
                    }
                    write_dfa_file(quotient(pruned, Partition::from_labels(labels)), min_emit);
                } else {
                    std::ofstream out(min_emit);
                    if (!out) throw std::runtime_error("cannot open " + min_emit);
                    out << "partition " << p.num_blocks << "\n";
                    for (StateId b = 0; b < p.num_blocks; ++b) {
                        out << "block " << b << ":";
                        for (StateId q = 0; q < dfa->num_states; ++q) {
                            if (p.block_of[q] == b) out << " " << q;
                        }
                        out << "\n";
                    }
                }
            }
            return 0;
        }

        if (*equiv || *include) {
            Dfa a = read_dfa_file(eq_a);
            Dfa b = read_dfa_file(eq_b);
            ExploreOptions opts;
            opts.match_letters_by_name = eq_by_name;
            opts.max_visited = mem.max_visited();
            if (*equiv) {
                return report_verdict(a, check_equiv(a, b, opts), eq_stats, "equivalent");
            }
            return report_verdict(a, check_inclusion(a, b, opts), eq_stats, "included");
        }

        if (*convert) {
            Lts lts = load_aut(read_file(conv_in));
            DeterminizeOptions opts;
            opts.timeout_s = conv_timeout;
            opts.max_states = conv_max_states;
            Dfa dfa = complete_to_dfa(determinize(lts, opts));
            write_dfa_file(dfa, conv_out);
            std::cout << "states=" << dfa.num_states << " alphabet=" << dfa.alphabet_size << "\n";
            return 0;
        }

        if (*bench) {
            std::vector<Algorithm> algos;
            std::stringstream ss(bench_algos);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                if (!tok.empty()) algos.push_back(parse_algo(tok));
            }
            if (algos.empty()) throw std::invalid_argument("--algos parsed to an empty list");

            std::ofstream file;
            if (!bench_out.empty()) {
                file.open(bench_out);
                if (!file) throw std::runtime_error("cannot open " + bench_out);
            }
            std::ostream& out = bench_out.empty() ? std::cout : file;
            out << kCsvHeader << "\n";

            for (const auto& spec : bench_suites) {
                SuiteEntry suite = parse_suite(spec);
                for (std::uint32_t param = suite.lo; param <= suite.hi; ++param) {
                    std::string name = suite.family + "_" + std::to_string(param);
                    std::shared_ptr<const Dfa> dfa;
                    try {
                        if (suite.family == "fib") {
                            dfa = std::make_shared<const Dfa>(gen_fib(param));
                        } else if (suite.family == "random") {
                            dfa = std::make_shared<const Dfa>(gen_random_dfa(param, bench_k, 0.5, param));
                        } else {
                            dfa = std::make_shared<const Dfa>(
                                generate_family(suite.family, std::nullopt, param, bench_k, 0.5, param));
                        }
                    } catch (const ResourceError& e) {
                        std::cerr << name << ": " << e.what() << "\n";
                        for (Algorithm algo : algos) {
                            BenchRecord rec;
                            rec.name = name;
                            rec.algo = algo;
                            rec.status = "out-of-memory";
                            print_record(out, rec);
                        }
                        continue;
                    }
                    for (Algorithm algo : algos) {
                        BenchRecord rec = run_benchmark(name, dfa, algo, ElectionPolicy::min_index(),
                                                        bench_runs, bench_timeout, mem);
                        print_record(out, rec);
                        out.flush();
                    }
                }
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
