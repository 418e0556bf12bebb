// spotlight: mine token patterns that separate two groups of generated texts,
// build ground-truth benchmarks, and score findings against them.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spotlight/baselines.hpp"
#include "spotlight/benchgen.hpp"
#include "spotlight/corpus.hpp"
#include "spotlight/eval.hpp"
#include "spotlight/miner.hpp"
#include "spotlight/version.hpp"

namespace {

using namespace spotlight;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const std::string& path, const std::string& command,
                    const nlohmann::json& config, const std::vector<std::string>& inputs,
                    double duration_ms) {
    nlohmann::json inputs_json = nlohmann::json::object();
    for (const std::string& p : inputs) inputs_json[p] = "fnv1a:" + hex64(fnv1a_file(p));
    nlohmann::json j = {{"command", command},
                        {"config", config},
                        {"inputs", inputs_json},
                        {"tool_version", kToolVersion},
                        {"duration_ms", duration_ms}};
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (out) out << j.dump(2) << '\n';
}

std::string snippet_of(const Group& group, std::size_t source_id) {
    for (const TokenSequence& text : group.texts) {
        if (text.source_id != source_id) continue;
        std::string s;
        for (std::size_t i = 0; i < text.tokens.size(); ++i) {
            if (i) s.push_back(' ');
            s += text.tokens[i];
            if (s.size() > 140) break;
        }
        if (s.size() > 120) {
            std::size_t cut = 117;
            while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xc0) == 0x80) --cut;
            s = s.substr(0, cut) + "...";
        }
        return s;
    }
    return "";
}

std::string pattern_str(const TokenPattern& p) {
    std::string s = "{";
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        if (i) s += ", ";
        s += p.tokens[i];
    }
    return s + "}";
}

void print_findings_table(const std::vector<PatternFinding>& findings, const Group& g1,
                          const Group& g2) {
    if (findings.empty()) {
        std::cout << "0 patterns found\n";
        return;
    }
    std::cout << findings.size() << " patterns found\n";
    std::printf("%-40s %12s %12s %12s  %s\n", "Pattern", "n(G1)/N1", "n(G2)/N2", "p-value",
                "Example");
    for (const PatternFinding& f : findings) {
        std::string counts1 =
            std::to_string(f.table.n1) + "/" + std::to_string(f.table.N1);
        std::string counts2 =
            std::to_string(f.table.n2) + "/" + std::to_string(f.table.N2);
        std::string example;
        if (!f.examples.empty()) {
            const Group& favored = f.direction == Direction::G1 ? g1 : g2;
            example = snippet_of(favored, f.examples[0].source_id);
        }
        std::printf("%-40s %12s %12s %12.4g  %s\n", pattern_str(f.pattern).c_str(),
                    counts1.c_str(), counts2.c_str(), f.p_value, example.c_str());
    }
}

std::vector<PatternFinding> ctfidf_findings(const Group& g1, const Group& g2, int k) {
    const CtfidfResult ranked = ctfidf_rank(g1, g2, k);
    std::vector<PatternFinding> findings;
    const auto add = [&](const std::vector<WeightedPattern>& list, Direction dir) {
        for (const WeightedPattern& wp : list) {
            PatternFinding f;
            f.pattern = wp.pattern;
            f.table = contingency(wp.pattern, g1, g2);
            f.p_value = fisher_two_sided(f.table);
            f.direction = dir;
            f.score = wp.weight;
            const Group& favored = dir == Direction::G1 ? g1 : g2;
            const GroupLabel label = dir == Direction::G1 ? GroupLabel::G1 : GroupLabel::G2;
            for (const TokenSequence& text : favored.texts) {
                if (f.examples.size() >= 3) break;
                if (occurs(f.pattern, text)) f.examples.push_back({label, text.source_id});
            }
            findings.push_back(std::move(f));
        }
    };
    add(ranked.top_g1, Direction::G1);
    add(ranked.top_g2, Direction::G2);
    return findings;
}

struct MineOptions {
    std::string g1_path, g2_path;
    std::string format = "jsonl";
    std::string method = "dpm";
    double alpha = 0.01;
    std::int64_t min_support = 0;
    int max_len = 5;
    int top_k = 0;  // 0: all dpm findings; ctfidf/subgroup default to 10
    std::string out = "findings.json";
    int threads = 1;
};

int run_mine(const MineOptions& opt) {
    const auto t0 = Clock::now();
    const CorpusFormat format = parse_corpus_format(opt.format);
    LoadStats s1, s2;
    const Group g1 = load_group(opt.g1_path, format, GroupLabel::G1, &s1);
    const Group g2 = load_group(opt.g2_path, format, GroupLabel::G2, &s2);
    if (s1.dropped_empty)
        std::cerr << "warning: dropped " << s1.dropped_empty << " empty documents from "
                  << opt.g1_path << "\n";
    if (s2.dropped_empty)
        std::cerr << "warning: dropped " << s2.dropped_empty << " empty documents from "
                  << opt.g2_path << "\n";

    std::vector<PatternFinding> findings;
    if (opt.method == "dpm") {
        MinerConfig cfg;
        cfg.alpha = opt.alpha;
        cfg.min_support = opt.min_support;
        cfg.max_len = opt.max_len;
        cfg.threads = opt.threads;
        MineResult res = mine(g1, g2, cfg);
        for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
        findings = std::move(res.findings);
        if (opt.top_k > 0 && findings.size() > static_cast<std::size_t>(opt.top_k)) {
            findings.resize(static_cast<std::size_t>(opt.top_k));
        }
    } else if (opt.method == "ctfidf") {
        findings = ctfidf_findings(g1, g2, opt.top_k > 0 ? opt.top_k : 10);
    } else if (opt.method == "subgroup") {
        SubgroupConfig cfg;
        cfg.k = opt.top_k > 0 ? opt.top_k : 10;
        cfg.max_len = opt.max_len;
        SubgroupResult res = subgroup_mine(g1, g2, cfg);
        if (res.truncated) std::cerr << "warning: subgroup search truncated at node budget\n";
        findings = std::move(res.findings);
    } else {
        throw std::invalid_argument("unknown method: " + opt.method);
    }

    print_findings_table(findings, g1, g2);
    write_findings(findings, opt.out);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest(opt.out + ".manifest.json", "mine",
                   {{"g1", opt.g1_path},
                    {"g2", opt.g2_path},
                    {"format", opt.format},
                    {"method", opt.method},
                    {"alpha", opt.alpha},
                    {"min_support", opt.min_support},
                    {"max_len", opt.max_len},
                    {"top_k", opt.top_k},
                    {"threads", opt.threads}},
                   {opt.g1_path, opt.g2_path}, ms);
    return 0;
}

struct BenchgenOptions {
    int benchmark = 1;
    std::size_t n = 100;
    std::uint64_t seed = 1;
    double bias = 0.8;
    double p_apply = 0.3;
    std::string dict_path;
    std::string out;
    bool force = false;
};

BenchmarkInstance build_instance(int benchmark, std::size_t n, std::uint64_t seed, double bias,
                                 double p_apply, const std::string& dict_path) {
    // separate stream for the transformation stage
    const std::uint64_t tseed = seed ^ 0xd1b54a32d192ed03ull;
    switch (benchmark) {
        case 1: {
            const Group base = gen_base_corpus(BaseKind::Story, 2 * n, seed);
            return gen_benchmark1(base, n, bias, tseed);
        }
        case 2: {
            const Group base = gen_base_corpus(BaseKind::Email, 2 * n, seed);
            return gen_benchmark2(base, p_apply, tseed);
        }
        case 3: {
            const Group base = gen_base_corpus(BaseKind::Review, 2 * n, seed);
            const auto dict =
                dict_path.empty() ? default_antonyms() : load_antonyms_tsv(dict_path);
            return gen_benchmark3(base, dict, tseed);
        }
        default:
            throw std::invalid_argument("benchmark must be 1, 2 or 3");
    }
}

int run_benchgen(const BenchgenOptions& opt) {
    const auto t0 = Clock::now();
    BenchmarkInstance inst =
        build_instance(opt.benchmark, opt.n, opt.seed, opt.bias, opt.p_apply, opt.dict_path);
    for (const std::string& w : inst.warnings) std::cerr << "warning: " << w << "\n";
    write_instance(inst, opt.out, opt.force);
    std::cout << "benchmark " << opt.benchmark << " instance with 2x" << inst.g1.size()
              << " texts and " << inst.truth.patterns.size() << " truth patterns written to "
              << opt.out << "\n";
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest((fs::path(opt.out) / "run.manifest.json").string(), "benchgen",
                   {{"benchmark", opt.benchmark},
                    {"n", opt.n},
                    {"seed", opt.seed},
                    {"bias", opt.bias},
                    {"p_apply", opt.p_apply},
                    {"dict", opt.dict_path}},
                   {}, ms);
    return 0;
}

struct EvalOptions {
    std::string found_path, truth_path;
    std::string mode = "strict";
    bool banded = false;
    std::string out = "scores.json";
};

int run_eval(const EvalOptions& opt) {
    const auto t0 = Clock::now();
    const std::vector<PatternFinding> findings = read_findings(opt.found_path);
    const GroundTruthSet truth = read_truth(opt.truth_path);
    const std::vector<TokenPattern> found = patterns_of(findings);

    ScoreReport report;
    report.mode = parse_match_mode(opt.mode);
    const MatchReport match = report.mode == MatchMode::Strict ? match_strict(found, truth)
                                                               : match_soft(found, truth);
    report.scores = prf(match, found.size(), truth.patterns.size());
    std::cout << to_string(report.mode) << " precision " << report.scores.precision << " recall "
              << report.scores.recall << " f1 " << report.scores.f1 << "\n";
    if (opt.banded) {
        report.per_band = banded_recall(found, truth);
        for (const auto& [band, recall] : report.per_band) {
            std::cout << "recall(" << to_string(band) << ") " << recall << "\n";
        }
    }
    write_scores(report, opt.out);
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_manifest(opt.out + ".manifest.json", "eval",
                   {{"found", opt.found_path},
                    {"truth", opt.truth_path},
                    {"mode", opt.mode},
                    {"banded", opt.banded}},
                   {opt.found_path, opt.truth_path}, ms);
    return 0;
}

struct SuiteOptions {
    int benchmark = 1;
    std::vector<std::string> methods;
    std::vector<std::size_t> sizes;
    std::vector<double> biases;
    std::vector<std::uint64_t> seeds;
    double p_apply = 0.3;
    std::string out;
    int threads = 1;
};

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_suite(const SuiteOptions& opt) {
    if (opt.methods.empty()) throw std::invalid_argument("--methods must not be empty");
    if (opt.sizes.empty()) throw std::invalid_argument("--sizes must not be empty");
    if (opt.seeds.empty()) throw std::invalid_argument("--seeds must not be empty");
    std::vector<double> biases = opt.biases;
    if (biases.empty()) biases = {0.8};

    fs::create_directories(opt.out);
    const std::string csv_path = (fs::path(opt.out) / "results.csv").string();
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw DataError("cannot write " + csv_path);
    csv << "benchmark,method,size,bias,seed,success,strict_precision,strict_recall,strict_f1,"
           "soft_precision,soft_recall,soft_f1,recall_high,recall_medium,recall_low,runtime_ms,"
           "status\n";

    for (std::size_t size : opt.sizes) {
        for (double bias : biases) {
            for (std::uint64_t seed : opt.seeds) {
                BenchmarkInstance inst;
                try {
                    inst = build_instance(opt.benchmark, size, seed, bias, opt.p_apply, "");
                } catch (const std::exception& e) {
                    for (const std::string& method : opt.methods) {
                        csv << opt.benchmark << ',' << method << ',' << size << ','
                            << (opt.benchmark == 1 ? fmt_double(bias) : std::string()) << ','
                            << seed << ",,,,,,,,,,,0,generation-error: " << e.what() << "\n";
                    }
                    continue;
                }
                for (const std::string& method : opt.methods) {
                    csv << opt.benchmark << ',' << method << ',' << size << ','
                        << (opt.benchmark == 1 ? fmt_double(bias) : std::string()) << ','
                        << seed << ',';
                    const auto c0 = Clock::now();
                    try {
                        std::vector<PatternFinding> findings;
                        if (method == "dpm") {
                            MinerConfig cfg;
                            cfg.threads = opt.threads;
                            findings = mine(inst.g1, inst.g2, cfg).findings;
                        } else if (method == "ctfidf") {
                            const int k = std::max<std::size_t>(1, inst.truth.patterns.size());
                            findings = ctfidf_findings(inst.g1, inst.g2, k);
                        } else if (method == "subgroup") {
                            SubgroupConfig cfg;
                            cfg.k = std::max<std::size_t>(1, inst.truth.patterns.size());
                            int truth_len = 1;
                            for (const TokenPattern& p : inst.truth.patterns) {
                                truth_len = std::max(truth_len, static_cast<int>(p.size()));
                            }
                            cfg.max_len = std::min(truth_len, 3);
                            findings = subgroup_mine(inst.g1, inst.g2, cfg).findings;
                        } else {
                            throw std::invalid_argument("unknown method: " + method);
                        }
                        const double ms = std::chrono::duration<double, std::milli>(
                                              Clock::now() - c0)
                                              .count();
                        const std::vector<TokenPattern> found = patterns_of(findings);
                        const Scores strict =
                            prf(match_strict(found, inst.truth), found.size(),
                                inst.truth.patterns.size());
                        const Scores soft = prf(match_soft(found, inst.truth), found.size(),
                                                inst.truth.patterns.size());
                        std::string success;
                        if (opt.benchmark == 1) {
                            success = success_any_token(found, gendered_pronouns()) ? "1" : "0";
                        }
                        std::string rh, rm, rl;
                        if (opt.benchmark == 3 && !inst.truth.bands.empty()) {
                            const auto bands = banded_recall(found, inst.truth);
                            const auto get = [&](Band b) {
                                const auto it = bands.find(b);
                                return it == bands.end() ? std::string() : fmt_double(it->second);
                            };
                            rh = get(Band::High);
                            rm = get(Band::Medium);
                            rl = get(Band::Low);
                        }
                        csv << success << ',' << fmt_double(strict.precision) << ','
                            << fmt_double(strict.recall) << ',' << fmt_double(strict.f1) << ','
                            << fmt_double(soft.precision) << ',' << fmt_double(soft.recall) << ','
                            << fmt_double(soft.f1) << ',' << rh << ',' << rm << ',' << rl << ','
                            << fmt_double(ms) << ",ok\n";
                    } catch (const std::exception& e) {
                        const double ms = std::chrono::duration<double, std::milli>(
                                              Clock::now() - c0)
                                              .count();
                        csv << ",,,,,,,,,," << fmt_double(ms) << ",error: " << e.what() << "\n";
                    }
                }
            }
        }
    }
    std::cout << "suite results written to " << csv_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"token-pattern differences between two groups of generated texts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    MineOptions mine_opt;
    CLI::App* mine_cmd = app.add_subcommand("mine", "mine discriminative token patterns");
    mine_cmd->add_option("--g1", mine_opt.g1_path, "first corpus file")->required();
    mine_cmd->add_option("--g2", mine_opt.g2_path, "second corpus file")->required();
    mine_cmd->add_option("--format", mine_opt.format, "corpus format: jsonl|lines")
        ->check(CLI::IsMember({"jsonl", "lines"}));
    mine_cmd->add_option("--method", mine_opt.method, "dpm|ctfidf|subgroup")
        ->check(CLI::IsMember({"dpm", "ctfidf", "subgroup"}));
    mine_cmd->add_option("--alpha", mine_opt.alpha, "significance level (dpm)");
    mine_cmd->add_option("--min-support", mine_opt.min_support,
                         "absolute document support floor (0 = auto)");
    mine_cmd->add_option("--max-len", mine_opt.max_len, "maximum pattern length");
    mine_cmd->add_option("--top-k", mine_opt.top_k, "result count cap (ctfidf/subgroup: k)");
    mine_cmd->add_option("--out", mine_opt.out, "findings output path");
    mine_cmd->add_option("--threads", mine_opt.threads, "worker threads")
        ->envname("SPOTLIGHT_THREADS");

    BenchgenOptions bench_opt;
    CLI::App* bench_cmd = app.add_subcommand("benchgen", "generate a ground-truth benchmark");
    bench_cmd->add_option("--benchmark", bench_opt.benchmark, "1|2|3")
        ->check(CLI::Range(1, 3))
        ->required();
    bench_cmd->add_option("--n", bench_opt.n, "texts per group")->required();
    bench_cmd->add_option("--seed", bench_opt.seed, "generator seed")->required();
    bench_cmd->add_option("--bias", bench_opt.bias, "male-doctor rate in G2 (benchmark 1)");
    bench_cmd->add_option("--p-apply", bench_opt.p_apply, "rule firing probability (benchmark 2)");
    bench_cmd->add_option("--dict", bench_opt.dict_path, "antonym TSV (benchmark 3)");
    bench_cmd->add_option("--out", bench_opt.out, "instance directory")->required();
    bench_cmd->add_flag("--force", bench_opt.force, "overwrite existing instance files");

    EvalOptions eval_opt;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score findings against ground truth");
    eval_cmd->add_option("--found", eval_opt.found_path, "findings.json")->required();
    eval_cmd->add_option("--truth", eval_opt.truth_path, "truth.json")->required();
    eval_cmd->add_option("--mode", eval_opt.mode, "strict|soft")
        ->check(CLI::IsMember({"strict", "soft"}));
    eval_cmd->add_flag("--banded", eval_opt.banded, "also report per-band recall");
    eval_cmd->add_option("--out", eval_opt.out, "scores output path");

    SuiteOptions suite_opt;
    CLI::App* suite_cmd = app.add_subcommand("suite", "run a generate-mine-eval grid");
    suite_cmd->add_option("--benchmark", suite_opt.benchmark, "1|2|3")
        ->check(CLI::Range(1, 3))
        ->required();
    suite_cmd->add_option("--methods", suite_opt.methods, "methods to run")
        ->delimiter(',')
        ->required();
    suite_cmd->add_option("--sizes", suite_opt.sizes, "group sizes")->delimiter(',')->required();
    suite_cmd->add_option("--biases", suite_opt.biases, "bias grid (benchmark 1)")
        ->delimiter(',');
    suite_cmd->add_option("--seeds", suite_opt.seeds, "seeds")->delimiter(',')->required();
    suite_cmd->add_option("--p-apply", suite_opt.p_apply, "rule firing probability (benchmark 2)");
    suite_cmd->add_option("--out", suite_opt.out, "output directory")->required();
    suite_cmd->add_option("--threads", suite_opt.threads, "worker threads")
        ->envname("SPOTLIGHT_THREADS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (mine_cmd->parsed()) return run_mine(mine_opt);
        if (bench_cmd->parsed()) return run_benchgen(bench_opt);
        if (eval_cmd->parsed()) return run_eval(eval_opt);
        if (suite_cmd->parsed()) return run_suite(suite_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
