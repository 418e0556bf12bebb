#pragma once

#include <cstdint>
#include <vector>

#include "spotlight/corpus.hpp"

namespace spotlight {

/// 2x2 document-count table for one pattern over two groups.
struct Contingency {
    std::int64_t n1 = 0;  // docs in G1 containing the pattern
    std::int64_t N1 = 0;  // |G1|
    std::int64_t n2 = 0;  // docs in G2 containing the pattern
    std::int64_t N2 = 0;  // |G2|

    bool operator==(const Contingency&) const = default;
};

Contingency contingency(const TokenPattern& pattern, const Group& g1, const Group& g2);

/// Two-sided Fisher exact p-value of [[n1, N1-n1], [n2, N2-n2]] by
/// hypergeometric enumeration: sums P(k) over all tables with fixed margins
/// whose probability is <= the observed one (1e-12 relative slack for ties).
double fisher_two_sided(const Contingency& c);

/// n1/N1 - n2/N2. Positive favors G1, negative favors G2.
double rate_difference(const Contingency& c);

/// Two-proportion z statistic with pooled variance; 0 when the pooled rate is
/// degenerate (0 or 1).
double standardized_effect(const Contingency& c);

/// Benjamini-Hochberg step-up selection: returns the indices (into pvalues)
/// of all hypotheses at sorted rank <= the largest i with p(i) <= (i/m)*alpha.
std::vector<std::size_t> bh_select(const std::vector<double>& pvalues, double alpha);

}  // namespace spotlight
