#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spotlight/corpus.hpp"

namespace spotlight {

enum class BaseKind { Story, Email, Review };

BaseKind parse_base_kind(const std::string& name);

enum class RuleCategory { Pronoun, Emoji, Greeting, Signoff, Salutation, Abbreviation, Antonym };

/// One transformation rule: an original token phrase (empty only for pure
/// insertions) and the phrases it may be replaced with. Both sides are fixed
/// points of the tokenizer.
struct ReplacementRule {
    std::vector<std::string> original;
    std::vector<std::vector<std::string>> replacements;
    RuleCategory category = RuleCategory::Antonym;
};

enum class Band { High, Medium, Low };

std::string to_string(Band band);
Band parse_band(const std::string& name);

/// The pattern set induced by a benchmark's transformations.
struct GroundTruthSet {
    std::vector<TokenPattern> patterns;
    std::map<std::size_t, Band> bands;                        // pattern index -> band
    std::map<std::size_t, std::int64_t> application_counts;   // pattern index -> texts fired
};

/// One recorded rule firing, positioned in the transformed token sequence so
/// the injection can be reverted exactly.
struct Application {
    std::size_t doc = 0;   // document index within the transformed group
    std::size_t pos = 0;   // token position of the inserted span
    std::vector<std::string> original;     // tokens removed (empty for insertions)
    std::vector<std::string> replacement;  // tokens inserted
};

struct InstanceMeta {
    int benchmark = 0;
    std::uint64_t seed = 0;
    nlohmann::json params;
};

struct BenchmarkInstance {
    Group g1, g2;
    GroundTruthSet truth;
    InstanceMeta meta;
    std::vector<Application> applied_g1, applied_g2;
    std::vector<std::string> warnings;
};

/// Deterministic template-based base corpora. Story texts narrate a male
/// doctor's day (every text passes filter_masculine), email texts are formal
/// student-to-professor mail carrying every phrase the style rules target, and
/// review texts are positive movie reviews whose sentiment adjectives are
/// drawn from the default antonym keys with Zipf-distributed ranks.
Group gen_base_corpus(BaseKind kind, std::size_t n, std::uint64_t seed);

/// Keeps texts whose first gendered pronoun (case-insensitive over
/// he/she/him/her/his) is masculine.
Group filter_masculine(const Group& group);

/// Token-wise map he->she, He->She, him->her, Him->Her, his->her, His->Her.
TokenSequence flip_pronouns(const TokenSequence& text);

/// Gender-flip benchmark: G1 flips exactly round(0.5*n) texts, G2 exactly
/// round((1-bias)*n); truth is the ten singleton pronoun patterns.
BenchmarkInstance gen_benchmark1(const Group& base, std::size_t n_per_group, double bias,
                                 std::uint64_t seed);

/// Style-transfer benchmark: each matching style rule fires per text with
/// probability p_apply on the second half; truth holds both sides of every
/// applied rule.
BenchmarkInstance gen_benchmark2(const Group& base, double p_apply, std::uint64_t seed);

struct Benchmark3Config {
    std::int64_t band_high = 100;   // texts fired for a high-frequency pattern
    std::int64_t band_medium = 10;  // below band_high; fewer is low
};

/// Sentiment-flip benchmark: every occurrence of every dictionary key in the
/// second half is replaced by its antonym; truth bands patterns by how many
/// texts each rule touched.
BenchmarkInstance gen_benchmark3(const Group& base,
                                 const std::vector<std::pair<std::string, std::string>>& antonyms,
                                 std::uint64_t seed, const Benchmark3Config& cfg = {});

/// Writes g1.jsonl, g2.jsonl, truth.json and meta.json into dir. Refuses to
/// overwrite existing instance files unless force is set.
void write_instance(const BenchmarkInstance& instance, const std::string& dir, bool force = false);

GroundTruthSet read_truth(const std::string& path);
void write_truth(const GroundTruthSet& truth, const std::string& path);

/// Undoes a recorded application log, returning the pre-transform documents.
std::vector<TokenSequence> revert_applications(const Group& transformed,
                                               const std::vector<Application>& log);

/// The 50-pair positive->negative adjective dictionary used by benchmark 3.
const std::vector<std::pair<std::string, std::string>>& default_antonyms();

/// The five emoji tokens the style rules may insert.
const std::vector<std::string>& emoji_tokens();

/// The benchmark-2 style rule set (greeting, sign-off, salutation,
/// abbreviations, emoji insertion).
const std::vector<ReplacementRule>& styler_rules();

/// Tab-separated "positive<TAB>negative" pairs, one per line; # comments.
std::vector<std::pair<std::string, std::string>> load_antonyms_tsv(const std::string& path);

}  // namespace spotlight
