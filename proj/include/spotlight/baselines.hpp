#pragma once

#include <cstdint>
#include <vector>

#include "spotlight/corpus.hpp"
#include "spotlight/miner.hpp"

namespace spotlight {

struct WeightedPattern {
    TokenPattern pattern;
    double weight = 0.0;
};

struct CtfidfResult {
    std::vector<WeightedPattern> top_g1;
    std::vector<WeightedPattern> top_g2;
};

/// Class-based tf-idf over token-level counts with bm25-style idf and
/// square-root term damping:
///   weight(t,c) = sqrt(tf_{t,c}) * ln(1 + (A - f_t + 0.5)/(f_t + 0.5))
/// where f_t is the cross-class frequency and A the average class token mass
/// (log argument clamped at 1). Each class ranks tokens by
/// weight(t,c) - weight(t,other); top k per class, ties lexicographic.
CtfidfResult ctfidf_rank(const Group& g1, const Group& g2, int k);

/// bm25-style idf component shared by both classes.
double ctfidf_idf(double f_t, double avg_class_mass);

struct SubgroupConfig {
    int max_len = 1;
    int k = 10;
    double a = 1.0;                       // StandardQF size exponent
    std::int64_t node_budget = 10000000;  // DFS node cap before truncation
};

struct SubgroupResult {
    std::vector<PatternFinding> findings;
    bool truncated = false;
};

/// Exhaustive depth-first subgroup discovery over token-presence conjunctions
/// scored with StandardQF q_a(P) = n_P^a * (p_P - p_0), evaluated against both
/// group targets and merged; top-k by |q|, ties lexicographic. score carries q
/// with respect to the G2 target, so positive scores favor G2.
SubgroupResult subgroup_mine(const Group& g1, const Group& g2, const SubgroupConfig& cfg);

}  // namespace spotlight
