#pragma once

#include <map>
#include <string>
#include <vector>

#include "spotlight/benchgen.hpp"
#include "spotlight/corpus.hpp"
#include "spotlight/miner.hpp"

namespace spotlight {

enum class MatchMode { Strict, Soft };

std::string to_string(MatchMode mode);
MatchMode parse_match_mode(const std::string& name);

struct MatchReport {
    MatchMode mode = MatchMode::Strict;
    std::vector<std::size_t> matched_found;  // found indices counted correct
    std::vector<std::size_t> matched_truth;  // truth indices counted recovered
    std::int64_t tp_p = 0;                   // precision-side true positives
    std::int64_t tp_r = 0;                   // recall-side true positives
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

struct Scores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// A found pattern counts iff it equals a truth pattern as a token set.
MatchReport match_strict(const std::vector<TokenPattern>& found, const GroundTruthSet& truth);

/// A found pattern counts iff it shares at least one token with some truth
/// pattern; a truth pattern is recovered iff some found pattern overlaps it.
MatchReport match_soft(const std::vector<TokenPattern>& found, const GroundTruthSet& truth);

/// precision = TP_p/n_found, recall = TP_r/n_truth, F1 their harmonic mean
/// (each 0 when its denominator is 0).
Scores prf(const MatchReport& report, std::size_t n_found, std::size_t n_truth);

/// Soft recall computed separately over the truth patterns of each band.
/// Throws DataError when the truth carries no bands.
std::map<Band, double> banded_recall(const std::vector<TokenPattern>& found,
                                     const GroundTruthSet& truth);

/// True iff any found pattern intersects the target token set.
bool success_any_token(const std::vector<TokenPattern>& found,
                       const std::vector<std::string>& target_tokens);

/// The ten gendered pronoun surface forms benchmark 1 injects.
const std::vector<std::string>& gendered_pronouns();

std::vector<TokenPattern> patterns_of(const std::vector<PatternFinding>& findings);

// findings.json / scores.json round-trips (schemas shared with the CLI)
void write_findings(const std::vector<PatternFinding>& findings, const std::string& path);
std::vector<PatternFinding> read_findings(const std::string& path);

struct ScoreReport {
    MatchMode mode = MatchMode::Strict;
    Scores scores;
    std::map<Band, double> per_band;  // empty unless banded recall was computed
};

void write_scores(const ScoreReport& report, const std::string& path);

}  // namespace spotlight
