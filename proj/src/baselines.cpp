#include "spotlight/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace spotlight {

namespace {

struct TokenCounts {
    std::int64_t tf1 = 0;
    std::int64_t tf2 = 0;
};

std::map<std::string, TokenCounts> term_table(const Group& g1, const Group& g2,
                                              std::int64_t* total1, std::int64_t* total2) {
    std::map<std::string, TokenCounts> counts;
    *total1 = 0;
    *total2 = 0;
    for (const TokenSequence& text : g1.texts) {
        *total1 += static_cast<std::int64_t>(text.tokens.size());
        for (const std::string& tok : text.tokens) counts[tok].tf1++;
    }
    for (const TokenSequence& text : g2.texts) {
        *total2 += static_cast<std::int64_t>(text.tokens.size());
        for (const std::string& tok : text.tokens) counts[tok].tf2++;
    }
    return counts;
}

}  // namespace

double ctfidf_idf(double f_t, double avg_class_mass) {
    const double ratio = (avg_class_mass - f_t + 0.5) / (f_t + 0.5);
    return std::log1p(std::max(0.0, ratio));
}

CtfidfResult ctfidf_rank(const Group& g1, const Group& g2, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    std::int64_t total1 = 0, total2 = 0;
    const auto counts = term_table(g1, g2, &total1, &total2);
    const double avg_mass = static_cast<double>(total1 + total2) / 2.0;

    struct Row {
        const std::string* token;
        double score;  // weight(t, G1) - weight(t, G2)
    };
    std::vector<Row> rows;
    rows.reserve(counts.size());
    for (const auto& [token, c] : counts) {
        const double idf = ctfidf_idf(static_cast<double>(c.tf1 + c.tf2), avg_mass);
        const double score = idf * (std::sqrt(static_cast<double>(c.tf1)) -
                                    std::sqrt(static_cast<double>(c.tf2)));
        rows.push_back({&token, score});
    }

    const auto take_top = [&](bool flip) {
        std::vector<Row> ranked = rows;
        if (flip) {
            for (Row& r : ranked) r.score = -r.score;
        }
        std::sort(ranked.begin(), ranked.end(), [](const Row& a, const Row& b) {
            if (a.score != b.score) return a.score > b.score;
            return *a.token < *b.token;
        });
        if (ranked.size() > static_cast<std::size_t>(k)) {
            ranked.resize(static_cast<std::size_t>(k));
        }
        std::vector<WeightedPattern> out;
        out.reserve(ranked.size());
        for (const Row& r : ranked) out.push_back({TokenPattern::of({*r.token}), r.score});
        return out;
    };

    CtfidfResult result;
    result.top_g1 = take_top(false);
    result.top_g2 = take_top(true);
    return result;
}

SubgroupResult subgroup_mine(const Group& g1, const Group& g2, const SubgroupConfig& cfg) {
    if (cfg.k < 1 || cfg.max_len < 1) throw std::invalid_argument("k and max_len must be >= 1");
    if (!(cfg.a > 0.0 && cfg.a <= 1.0)) throw std::invalid_argument("a must be in (0, 1]");

    // token -> covered documents, documents numbered g1 first then g2
    const std::size_t N1 = g1.size(), N2 = g2.size(), N = N1 + N2;
    std::map<std::string, std::vector<std::uint32_t>> postings;
    for (std::size_t d = 0; d < N1; ++d) {
        for (const std::string& tok : g1.texts[d].token_set) {
            postings[tok].push_back(static_cast<std::uint32_t>(d));
        }
    }
    for (std::size_t d = 0; d < N2; ++d) {
        for (const std::string& tok : g2.texts[d].token_set) {
            postings[tok].push_back(static_cast<std::uint32_t>(N1 + d));
        }
    }
    std::vector<const std::string*> tokens;
    std::vector<const std::vector<std::uint32_t>*> docs;
    for (const auto& [tok, ds] : postings) {
        tokens.push_back(&tok);
        docs.push_back(&ds);
    }

    struct Entry {
        double abs_q;
        double q;  // with respect to the G2 target
        std::vector<std::uint32_t> ids;
        Contingency table;
    };
    const auto better = [](const Entry& a, const Entry& b) {
        if (a.abs_q != b.abs_q) return a.abs_q > b.abs_q;
        return a.ids < b.ids;
    };
    std::vector<Entry> top;  // kept sorted best-first, at most k

    std::int64_t budget = cfg.node_budget;
    bool truncated = false;

    // depth-first over index-increasing conjunctions
    std::vector<std::uint32_t> stack_ids;
    const std::function<void(std::size_t, const std::vector<std::uint32_t>&)> dfs =
        [&](std::size_t first, const std::vector<std::uint32_t>& covered) {
            for (std::size_t t = first; t < tokens.size(); ++t) {
                if (budget-- <= 0) {
                    truncated = true;
                    return;
                }
                std::vector<std::uint32_t> child;
                if (stack_ids.empty()) {
                    child = *docs[t];
                } else {
                    child.reserve(std::min(covered.size(), docs[t]->size()));
                    std::set_intersection(covered.begin(), covered.end(), docs[t]->begin(),
                                          docs[t]->end(), std::back_inserter(child));
                }
                stack_ids.push_back(static_cast<std::uint32_t>(t));

                const std::int64_t n = static_cast<std::int64_t>(child.size());
                std::int64_t n2 = 0;
                for (std::uint32_t d : child) {
                    if (d >= N1) ++n2;
                }
                const std::int64_t n1 = n - n2;
                // n^a * (n2/n - N2/N), written over exact integer products so
                // swapping the groups negates q bit-for-bit; empty coverage
                // scores zero
                const double q =
                    n == 0 ? 0.0
                           : std::pow(static_cast<double>(n), cfg.a) *
                                 (static_cast<double>(n2 * static_cast<std::int64_t>(N1) -
                                                      n1 * static_cast<std::int64_t>(N2)) /
                                  (static_cast<double>(n) * static_cast<double>(N)));
                Entry e{std::abs(q), q, stack_ids,
                        Contingency{n1, static_cast<std::int64_t>(N1), n2,
                                    static_cast<std::int64_t>(N2)}};
                const auto it = std::lower_bound(top.begin(), top.end(), e, better);
                if (top.size() < static_cast<std::size_t>(cfg.k) || it != top.end()) {
                    top.insert(it, std::move(e));
                    if (top.size() > static_cast<std::size_t>(cfg.k)) top.pop_back();
                }

                if (static_cast<int>(stack_ids.size()) < cfg.max_len && !truncated) {
                    dfs(t + 1, child);
                }
                stack_ids.pop_back();
                if (truncated) return;
            }
        };
    dfs(0, {});

    SubgroupResult result;
    result.truncated = truncated;
    for (const Entry& e : top) {
        PatternFinding f;
        std::vector<std::string> toks;
        toks.reserve(e.ids.size());
        for (std::uint32_t id : e.ids) toks.push_back(*tokens[id]);
        f.pattern = TokenPattern::of(std::move(toks));
        f.table = e.table;
        f.p_value = fisher_two_sided(e.table);
        f.direction = e.q > 0.0 ? Direction::G2 : Direction::G1;
        f.score = e.q;
        const Group& favored = f.direction == Direction::G1 ? g1 : g2;
        const GroupLabel label = f.direction == Direction::G1 ? GroupLabel::G1 : GroupLabel::G2;
        for (const TokenSequence& text : favored.texts) {
            if (f.examples.size() >= 3) break;
            if (occurs(f.pattern, text)) f.examples.push_back({label, text.source_id});
        }
        result.findings.push_back(std::move(f));
    }
    return result;
}

}  // namespace spotlight
