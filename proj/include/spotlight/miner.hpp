#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spotlight/corpus.hpp"
#include "spotlight/stats.hpp"

namespace spotlight {

struct MinerConfig {
    double alpha = 0.01;            // significance level for reported patterns
    std::int64_t min_support = 0;   // 0 = auto: max(5, ceil(0.01 * (N1 + N2)))
    int max_len = 5;                // maximum pattern length
    int beam_width = 50;            // candidates kept per level
    double margin = 1.0;            // required |z| gain over best immediate sub-pattern
    std::uint64_t seed = 0;         // reserved for randomized tie resolution (unused)
    int threads = 1;

    std::int64_t resolved_min_support(std::int64_t total_docs) const;
};

enum class Direction { G1, G2 };

std::string to_string(Direction d);

struct ExampleRef {
    GroupLabel group;
    std::size_t source_id;
};

/// A mined pattern with its per-group document counts, test statistic and
/// example references into the favored group.
struct PatternFinding {
    TokenPattern pattern;
    Contingency table;
    double p_value = 1.0;
    Direction direction = Direction::G1;
    double score = 0.0;  // method-specific ranking value (z for dpm, q for subgroup)
    std::vector<ExampleRef> examples;
};

struct MineResult {
    std::vector<PatternFinding> findings;
    std::vector<std::string> warnings;
};

/// Discriminative conjunction-pattern miner. Seeds length-1 candidates from
/// the shared vocabulary, grows them by beam search on the pooled two-proportion
/// z statistic with a non-redundancy margin, tests every scored candidate with
/// the two-sided Fisher exact test, keeps those with p <= alpha, prunes
/// subset/superset redundancy and orders by p ascending.
MineResult mine(const Group& g1, const Group& g2, const MinerConfig& cfg = {});

}  // namespace spotlight
