#include "spotlight/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>
#include <stdexcept>

namespace spotlight {

namespace {

void check_table(const Contingency& c) {
    if (c.N1 < 1 || c.N2 < 1 || c.n1 < 0 || c.n2 < 0 || c.n1 > c.N1 || c.n2 > c.N2) {
        throw std::invalid_argument("invalid contingency table");
    }
}

// log k! lookup, grown on demand; lgamma values are deterministic per libm.
const double* log_fact_table(std::int64_t n) {
    thread_local std::vector<double> table{0.0};
    while (static_cast<std::int64_t>(table.size()) <= n) {
        table.push_back(table.back() + std::log(static_cast<double>(table.size())));
    }
    return table.data();
}

}  // namespace

Contingency contingency(const TokenPattern& pattern, const Group& g1, const Group& g2) {
    if (g1.texts.empty() || g2.texts.empty()) {
        throw std::invalid_argument("contingency requires non-empty groups");
    }
    Contingency c;
    c.n1 = support(pattern, g1);
    c.N1 = static_cast<std::int64_t>(g1.size());
    c.n2 = support(pattern, g2);
    c.N2 = static_cast<std::int64_t>(g2.size());
    return c;
}

double fisher_two_sided(const Contingency& c) {
    check_table(c);
    // canonical row order: the test is row-swap invariant, and evaluating both
    // orientations identically keeps group-swapped calls bit-equal
    if (std::tie(c.N1, c.n1) > std::tie(c.N2, c.n2)) {
        return fisher_two_sided({c.n2, c.N2, c.n1, c.N1});
    }
    const std::int64_t N = c.N1 + c.N2;
    const std::int64_t K = c.n1 + c.n2;
    const double* lf = log_fact_table(N);
    // log of C(N1,k)*C(N2,K-k)/C(N,K)
    const auto log_prob = [&](std::int64_t k) {
        return lf[c.N1] - lf[k] - lf[c.N1 - k] + lf[c.N2] - lf[K - k] - lf[c.N2 - (K - k)] -
               (lf[N] - lf[K] - lf[N - K]);
    };
    const std::int64_t k_min = std::max<std::int64_t>(0, K - c.N2);
    const std::int64_t k_max = std::min(K, c.N1);
    const double log_obs = log_prob(c.n1);
    const double cutoff = log_obs + std::log1p(1e-12);
    double p = 0.0;
    for (std::int64_t k = k_min; k <= k_max; ++k) {
        const double lp = log_prob(k);
        if (lp <= cutoff) p += std::exp(lp);
    }
    return std::min(1.0, p);
}

double rate_difference(const Contingency& c) {
    check_table(c);
    return static_cast<double>(c.n1) / static_cast<double>(c.N1) -
           static_cast<double>(c.n2) / static_cast<double>(c.N2);
}

double standardized_effect(const Contingency& c) {
    check_table(c);
    const double pooled = static_cast<double>(c.n1 + c.n2) / static_cast<double>(c.N1 + c.N2);
    if (pooled <= 0.0 || pooled >= 1.0) return 0.0;
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(c.N1) + 1.0 / static_cast<double>(c.N2)));
    return rate_difference(c) / se;
}

std::vector<std::size_t> bh_select(const std::vector<double>& pvalues, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    for (double p : pvalues) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p-values must be in [0,1]");
    }
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::size_t cut = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double threshold = alpha * static_cast<double>(i + 1) / static_cast<double>(m);
        if (pvalues[order[i]] <= threshold) cut = i + 1;
    }
    std::vector<std::size_t> selected(order.begin(), order.begin() + cut);
    std::sort(selected.begin(), selected.end());
    return selected;
}

}  // namespace spotlight
