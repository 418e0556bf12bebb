#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "spotlight/benchgen.hpp"
#include "spotlight/corpus.hpp"

using namespace spotlight;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spotlight_bench_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

bool tokens_equal(const Group& a, const Group& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.texts[i].tokens != b.texts[i].tokens) return false;
    }
    return true;
}

std::set<std::vector<std::string>> truth_patterns(const GroundTruthSet& truth) {
    std::set<std::vector<std::string>> out;
    for (const TokenPattern& p : truth.patterns) out.insert(p.tokens);
    return out;
}

std::int64_t docs_containing(const Group& g, const std::string& token) {
    return support(TokenPattern::of({token}), g);
}

}  // namespace

TEST_CASE("base corpora are deterministic per seed") {
    for (const BaseKind kind : {BaseKind::Story, BaseKind::Email, BaseKind::Review}) {
        const Group a = gen_base_corpus(kind, 2, 1);
        const Group b = gen_base_corpus(kind, 2, 1);
        CHECK(tokens_equal(a, b));
        const Group c = gen_base_corpus(kind, 2, 2);
        CHECK(!tokens_equal(a, c));
    }
}

TEST_CASE("base texts stay within the 60-200 token range") {
    for (const BaseKind kind : {BaseKind::Story, BaseKind::Email, BaseKind::Review}) {
        const Group g = gen_base_corpus(kind, 50, 3);
        for (const TokenSequence& t : g.texts) {
            CHECK(t.tokens.size() >= 60);
            CHECK(t.tokens.size() <= 200);
        }
    }
}

TEST_CASE("every story passes the masculine filter") {
    const Group stories = gen_base_corpus(BaseKind::Story, 100, 4);
    CHECK(filter_masculine(stories).size() == 100);
}

TEST_CASE("filter_masculine keys on the first gendered pronoun") {
    Group g;
    g.texts.push_back(tokenize("He greeted her .", 0));   // first pronoun masculine
    g.texts.push_back(tokenize("She thanked him .", 1));  // first pronoun feminine
    g.texts.push_back(tokenize("The doctor smiled .", 2));  // no pronouns at all
    g.texts.push_back(tokenize("Noticing HIM early", 3));   // case-insensitive scan
    const Group kept = filter_masculine(g);
    REQUIRE(kept.size() == 2);
    CHECK(kept.texts[0].source_id == 0);
    CHECK(kept.texts[1].source_id == 3);
}

TEST_CASE("flip_pronouns applies the token map and nothing else") {
    CHECK(flip_pronouns(tokenize("He checked his notes")).tokens ==
          std::vector<std::string>{"She", "checked", "her", "notes"});
    CHECK(flip_pronouns(tokenize("she kept her word")).tokens ==
          std::vector<std::string>{"she", "kept", "her", "word"});
    CHECK(flip_pronouns(tokenize("The doctor smiled")).tokens ==
          std::vector<std::string>{"The", "doctor", "smiled"});
    CHECK(flip_pronouns(tokenize("Him and His and him and his")).tokens ==
          std::vector<std::string>{"Her", "and", "Her", "and", "her", "and", "her"});
}

TEST_CASE("flip_pronouns is idempotent on its output") {
    const Group stories = gen_base_corpus(BaseKind::Story, 20, 6);
    for (const TokenSequence& t : stories.texts) {
        const TokenSequence once = flip_pronouns(t);
        CHECK(flip_pronouns(once).tokens == once.tokens);
    }
}

TEST_CASE("benchmark 1 flips exact counts and ships ten singleton patterns") {
    const Group base = gen_base_corpus(BaseKind::Story, 200, 1);
    const BenchmarkInstance inst = gen_benchmark1(base, 100, 0.8, 1);
    CHECK(inst.g1.size() == 100);
    CHECK(inst.g2.size() == 100);
    // exactly 80 texts in G2 keep masculine pronouns, 50 in G1
    CHECK(docs_containing(inst.g2, "he") == 80);
    CHECK(docs_containing(inst.g2, "she") == 20);
    CHECK(docs_containing(inst.g1, "he") == 50);

    REQUIRE(inst.truth.patterns.size() == 10);
    const auto pats = truth_patterns(inst.truth);
    CHECK(pats.count({"he"}) == 1);
    CHECK(pats.count({"she"}) == 1);
    CHECK(pats.count({"Him"}) == 1);
    for (const TokenPattern& p : inst.truth.patterns) CHECK(p.size() == 1);
    CHECK(inst.meta.benchmark == 1);
}

TEST_CASE("benchmark 1 at bias 0.5 is a null instance") {
    const Group base = gen_base_corpus(BaseKind::Story, 120, 2);
    const BenchmarkInstance inst = gen_benchmark1(base, 60, 0.5, 2);
    CHECK(docs_containing(inst.g1, "he") == 30);
    CHECK(docs_containing(inst.g2, "he") == 30);
}

TEST_CASE("benchmark 1 rejects an undersized base") {
    const Group base = gen_base_corpus(BaseKind::Story, 50, 3);
    CHECK_THROWS_AS(gen_benchmark1(base, 100, 0.8, 1), DataError);
}

TEST_CASE("benchmark 2 truth realizes the full style rule set") {
    const Group base = gen_base_corpus(BaseKind::Email, 500, 1);
    const BenchmarkInstance inst = gen_benchmark2(base, 0.3, 1);
    CHECK(inst.g1.size() == 250);
    CHECK(inst.g2.size() == 250);
    CHECK(inst.truth.patterns.size() == 33);
    CHECK(inst.truth.patterns.size() >= 32);
    CHECK(inst.truth.patterns.size() <= 35);

    const auto pats = truth_patterns(inst.truth);
    CHECK(pats.count({"Dear", "Professor"}) == 1);
    CHECK(pats.count({"Hi"}) == 1);

    std::size_t longest = 0, shortest = 99;
    for (const TokenPattern& p : inst.truth.patterns) {
        longest = std::max(longest, p.size());
        shortest = std::min(shortest, p.size());
    }
    CHECK(longest >= 4);
    CHECK(longest <= 10);
    CHECK(shortest == 1);
    CHECK(inst.warnings.empty());
}

TEST_CASE("benchmark 2 with p_apply 0 leaves the groups untouched and truth empty") {
    const Group base = gen_base_corpus(BaseKind::Email, 60, 5);
    const BenchmarkInstance inst = gen_benchmark2(base, 0.0, 5);
    CHECK(inst.truth.patterns.empty());
    CHECK(inst.applied_g2.empty());
    for (std::size_t i = 0; i < inst.g2.size(); ++i) {
        CHECK(inst.g2.texts[i].tokens == base.texts[30 + i].tokens);
    }
}

TEST_CASE("benchmark 2 warns when rules cannot match") {
    // story texts carry none of the email phrases
    const Group base = gen_base_corpus(BaseKind::Story, 20, 7);
    const BenchmarkInstance inst = gen_benchmark2(base, 0.3, 7);
    CHECK(!inst.warnings.empty());
}

TEST_CASE("style rule sides are tokenizer fixed points") {
    for (const ReplacementRule& rule : styler_rules()) {
        if (rule.original.empty()) {
            CHECK(rule.category == RuleCategory::Emoji);
        } else {
            std::string joined;
            for (std::size_t i = 0; i < rule.original.size(); ++i) {
                if (i) joined.push_back(' ');
                joined += rule.original[i];
            }
            CHECK(tokenize_text(joined) == rule.original);
        }
        for (const auto& rep : rule.replacements) {
            std::string joined;
            for (std::size_t i = 0; i < rep.size(); ++i) {
                if (i) joined.push_back(' ');
                joined += rep[i];
            }
            CHECK(tokenize_text(joined) == rep);
        }
    }
}

TEST_CASE("benchmark 3 replaces every key occurrence") {
    Group base;
    for (int i = 0; i < 20; ++i) {
        base.texts.push_back(tokenize(i % 3 ? "a brilliant and brilliant film about film"
                                            : "a plain film about film",
                                      i));
    }
    const BenchmarkInstance inst =
        gen_benchmark3(base, {{"brilliant", "dull"}}, 9, Benchmark3Config{4, 2});
    CHECK(docs_containing(inst.g2, "brilliant") == 0);
    // every replaced occurrence becomes the antonym
    std::int64_t dull_occurrences = 0, brilliant_base = 0;
    for (std::size_t i = 0; i < inst.g2.size(); ++i) {
        for (const std::string& tok : inst.g2.texts[i].tokens) {
            dull_occurrences += tok == "dull";
        }
        for (const std::string& tok : base.texts[10 + i].tokens) {
            brilliant_base += tok == "brilliant";
        }
    }
    CHECK(dull_occurrences == brilliant_base);
    const auto pats = truth_patterns(inst.truth);
    CHECK(pats.count({"brilliant"}) == 1);
    CHECK(pats.count({"dull"}) == 1);
    for (const TokenPattern& p : inst.truth.patterns) CHECK(p.size() == 1);
    CHECK(!inst.truth.bands.empty());
}

TEST_CASE("benchmark 3 with a non-occurring dictionary yields empty truth") {
    const Group base = gen_base_corpus(BaseKind::Review, 20, 2);
    const BenchmarkInstance inst = gen_benchmark3(base, {{"qqqq", "zzzz"}}, 2);
    CHECK(inst.truth.patterns.empty());
    CHECK(inst.applied_g2.empty());
}

TEST_CASE("benchmark 3 band thresholds are configurable") {
    Group base;
    for (int i = 0; i < 40; ++i) {
        std::string text = "pad pad pad";
        if (i % 2) text += " common";
        if (i % 10 == 1) text += " rare";
        base.texts.push_back(tokenize(text, i));
    }
    const BenchmarkInstance inst = gen_benchmark3(
        base, {{"common", "uncommon"}, {"rare", "frequent"}}, 3, Benchmark3Config{8, 3});
    REQUIRE(inst.truth.patterns.size() == 4);
    for (std::size_t i = 0; i < inst.truth.patterns.size(); ++i) {
        const auto count = inst.truth.application_counts.at(i);
        const Band band = inst.truth.bands.at(i);
        if (count >= 8) CHECK(band == Band::High);
        if (count < 3) CHECK(band == Band::Low);
    }
}

TEST_CASE("reverting the recorded applications restores the base half") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        {
            const Group base = gen_base_corpus(BaseKind::Story, 60, seed);
            const BenchmarkInstance inst = gen_benchmark1(base, 30, 0.8, seed);
            const auto reverted_g2 = revert_applications(inst.g2, inst.applied_g2);
            const auto reverted_g1 = revert_applications(inst.g1, inst.applied_g1);
            for (std::size_t i = 0; i < reverted_g2.size(); ++i) {
                CHECK(reverted_g2[i].tokens == base.texts[30 + i].tokens);
                CHECK(reverted_g1[i].tokens == base.texts[i].tokens);
            }
        }
        {
            const Group base = gen_base_corpus(BaseKind::Email, 60, seed);
            const BenchmarkInstance inst = gen_benchmark2(base, 0.5, seed);
            const auto reverted = revert_applications(inst.g2, inst.applied_g2);
            for (std::size_t i = 0; i < reverted.size(); ++i) {
                CHECK(reverted[i].tokens == base.texts[30 + i].tokens);
            }
        }
        {
            const Group base = gen_base_corpus(BaseKind::Review, 60, seed);
            const BenchmarkInstance inst = gen_benchmark3(base, default_antonyms(), seed);
            const auto reverted = revert_applications(inst.g2, inst.applied_g2);
            for (std::size_t i = 0; i < reverted.size(); ++i) {
                CHECK(reverted[i].tokens == base.texts[30 + i].tokens);
            }
        }
    }
}

TEST_CASE("review adjectives follow a decaying rank-frequency curve") {
    const Group reviews = gen_base_corpus(BaseKind::Review, 1000, 7);
    const auto& dict = default_antonyms();
    std::vector<std::int64_t> counts(dict.size(), 0);
    for (const TokenSequence& t : reviews.texts) {
        for (std::size_t r = 0; r < dict.size(); ++r) {
            for (const std::string& tok : t.tokens) {
                if (tok == dict[r].first) ++counts[r];
            }
        }
    }
    const auto window = [&](std::size_t lo, std::size_t hi) {
        double sum = 0.0;
        for (std::size_t r = lo; r < hi; ++r) sum += static_cast<double>(counts[r]);
        return sum / static_cast<double>(hi - lo);
    };
    const double head = window(0, 5), mid = window(5, 20), tail = window(35, 50);
    CHECK(head > mid);
    CHECK(mid > tail);
    CHECK(head > 10.0 * std::max(1.0, tail));  // heavy-tailed decay
    CHECK(counts[0] > 0);
    CHECK(window(35, 50) >= 0.0);
}

TEST_CASE("benchmark instances are deterministic") {
    const Group base = gen_base_corpus(BaseKind::Email, 80, 11);
    const BenchmarkInstance a = gen_benchmark2(base, 0.3, 11);
    const BenchmarkInstance b = gen_benchmark2(base, 0.3, 11);
    CHECK(tokens_equal(a.g2, b.g2));
    CHECK(truth_patterns(a.truth) == truth_patterns(b.truth));
}

TEST_CASE("write_instance round-trips and refuses accidental overwrite") {
    TempDir dir;
    const Group base = gen_base_corpus(BaseKind::Story, 40, 13);
    const BenchmarkInstance inst = gen_benchmark1(base, 20, 0.9, 13);
    const std::string out = dir.file("inst");
    write_instance(inst, out);

    const Group g1 = load_group(out + "/g1.jsonl", CorpusFormat::Jsonl, GroupLabel::G1);
    const Group g2 = load_group(out + "/g2.jsonl", CorpusFormat::Jsonl, GroupLabel::G2);
    CHECK(tokens_equal(g1, inst.g1));
    CHECK(tokens_equal(g2, inst.g2));

    const GroundTruthSet truth = read_truth(out + "/truth.json");
    REQUIRE(truth.patterns.size() == inst.truth.patterns.size());
    for (std::size_t i = 0; i < truth.patterns.size(); ++i) {
        CHECK(truth.patterns[i] == inst.truth.patterns[i]);
    }
    CHECK(truth.application_counts == inst.truth.application_counts);
    CHECK(truth.bands == inst.truth.bands);

    std::ifstream meta(out + "/meta.json");
    nlohmann::json meta_json;
    meta >> meta_json;
    CHECK(meta_json["seed"] == 13);
    CHECK(meta_json["benchmark"] == 1);
    CHECK(meta_json.contains("tool_version"));

    CHECK_THROWS_AS(write_instance(inst, out), DataError);
    CHECK_NOTHROW(write_instance(inst, out, /*force=*/true));
}

TEST_CASE("the shipped dictionary file matches the built-in table") {
    const auto from_file =
        load_antonyms_tsv(std::string(SPOTLIGHT_DATA_DIR) + "/antonyms_default.tsv");
    const auto& builtin = default_antonyms();
    REQUIRE(from_file.size() == builtin.size());
    CHECK(builtin.size() == 50);
    std::set<std::string> keys, values;
    for (std::size_t i = 0; i < builtin.size(); ++i) {
        CHECK(from_file[i] == builtin[i]);
        CHECK(tokenize_text(builtin[i].first).size() == 1);
        CHECK(tokenize_text(builtin[i].second).size() == 1);
        keys.insert(builtin[i].first);
        values.insert(builtin[i].second);
    }
    CHECK(keys.size() == 50);
    CHECK(values.size() == 50);
    for (const std::string& k : keys) CHECK(values.count(k) == 0);
}

TEST_CASE("the shipped emoji file matches the built-in set") {
    std::ifstream in(std::string(SPOTLIGHT_DATA_DIR) + "/emoji_default.txt");
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    CHECK(lines == emoji_tokens());
    CHECK(emoji_tokens().size() == 5);
    for (const std::string& e : emoji_tokens()) {
        CHECK(tokenize_text(e) == std::vector<std::string>{e});
    }
}

TEST_CASE("dictionary words stay out of the review scaffolding") {
    const Group reviews = gen_base_corpus(BaseKind::Review, 200, 15);
    std::set<std::string> negatives;
    for (const auto& [key, value] : default_antonyms()) negatives.insert(value);
    for (const TokenSequence& t : reviews.texts) {
        for (const std::string& tok : t.tokens) CHECK(negatives.count(tok) == 0);
    }
}
