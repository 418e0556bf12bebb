#include "spotlight/eval.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace spotlight {

namespace {

bool sets_overlap(const TokenPattern& a, const TokenPattern& b) {
    auto ia = a.tokens.begin();
    auto ib = b.tokens.begin();
    while (ia != a.tokens.end() && ib != b.tokens.end()) {
        if (*ia == *ib) return true;
        if (*ia < *ib) {
            ++ia;
        } else {
            ++ib;
        }
    }
    return false;
}

MatchReport match_generic(const std::vector<TokenPattern>& found, const GroundTruthSet& truth,
                          MatchMode mode) {
    MatchReport report;
    report.mode = mode;
    const auto hit = [&](const TokenPattern& f, const TokenPattern& t) {
        return mode == MatchMode::Strict ? f == t : sets_overlap(f, t);
    };
    std::vector<char> truth_hit(truth.patterns.size(), 0);
    for (std::size_t i = 0; i < found.size(); ++i) {
        bool any = false;
        for (std::size_t j = 0; j < truth.patterns.size(); ++j) {
            if (hit(found[i], truth.patterns[j])) {
                any = true;
                truth_hit[j] = 1;
            }
        }
        if (any) report.matched_found.push_back(i);
    }
    for (std::size_t j = 0; j < truth.patterns.size(); ++j) {
        if (truth_hit[j]) report.matched_truth.push_back(j);
    }
    report.tp_p = static_cast<std::int64_t>(report.matched_found.size());
    report.tp_r = static_cast<std::int64_t>(report.matched_truth.size());
    report.fp = static_cast<std::int64_t>(found.size()) - report.tp_p;
    report.fn = static_cast<std::int64_t>(truth.patterns.size()) - report.tp_r;
    return report;
}

}  // namespace

std::string to_string(MatchMode mode) { return mode == MatchMode::Strict ? "strict" : "soft"; }

MatchMode parse_match_mode(const std::string& name) {
    if (name == "strict") return MatchMode::Strict;
    if (name == "soft") return MatchMode::Soft;
    throw std::invalid_argument("unknown match mode: " + name);
}

MatchReport match_strict(const std::vector<TokenPattern>& found, const GroundTruthSet& truth) {
    return match_generic(found, truth, MatchMode::Strict);
}

MatchReport match_soft(const std::vector<TokenPattern>& found, const GroundTruthSet& truth) {
    return match_generic(found, truth, MatchMode::Soft);
}

Scores prf(const MatchReport& report, std::size_t n_found, std::size_t n_truth) {
    Scores s;
    s.precision = n_found == 0 ? 0.0
                               : static_cast<double>(report.tp_p) / static_cast<double>(n_found);
    s.recall = n_truth == 0 ? 0.0
                            : static_cast<double>(report.tp_r) / static_cast<double>(n_truth);
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

std::map<Band, double> banded_recall(const std::vector<TokenPattern>& found,
                                     const GroundTruthSet& truth) {
    if (truth.bands.empty()) {
        throw DataError("truth has no frequency bands; regenerate it with bands");
    }
    std::map<Band, std::pair<std::int64_t, std::int64_t>> tally;  // band -> (recovered, total)
    for (const auto& [idx, band] : truth.bands) {
        auto& [recovered, total] = tally[band];
        ++total;
        for (const TokenPattern& f : found) {
            if (sets_overlap(f, truth.patterns[idx])) {
                ++recovered;
                break;
            }
        }
    }
    std::map<Band, double> out;
    for (const auto& [band, counts] : tally) {
        out[band] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    }
    return out;
}

bool success_any_token(const std::vector<TokenPattern>& found,
                       const std::vector<std::string>& target_tokens) {
    if (target_tokens.empty()) throw std::invalid_argument("target token set must be non-empty");
    const TokenPattern target = TokenPattern::of(target_tokens);
    for (const TokenPattern& f : found) {
        if (sets_overlap(f, target)) return true;
    }
    return false;
}

const std::vector<std::string>& gendered_pronouns() {
    static const std::vector<std::string> pronouns = {"he",  "He",  "him", "Him", "his",
                                                      "His", "she", "She", "her", "Her"};
    return pronouns;
}

std::vector<TokenPattern> patterns_of(const std::vector<PatternFinding>& findings) {
    std::vector<TokenPattern> out;
    out.reserve(findings.size());
    for (const PatternFinding& f : findings) out.push_back(f.pattern);
    return out;
}

void write_findings(const std::vector<PatternFinding>& findings, const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PatternFinding& f : findings) {
        arr.push_back({{"tokens", f.pattern.tokens},
                       {"count_g1", f.table.n1},
                       {"count_g2", f.table.n2},
                       {"p_value", f.p_value},
                       {"direction", to_string(f.direction)}});
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << arr.dump(2) << '\n';
}

std::vector<PatternFinding> read_findings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    nlohmann::json arr;
    try {
        in >> arr;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
    if (!arr.is_array()) throw DataError(path + ": expected a JSON array of findings");
    std::vector<PatternFinding> findings;
    for (const auto& item : arr) {
        PatternFinding f;
        f.pattern = TokenPattern::of(item.at("tokens").get<std::vector<std::string>>());
        f.table.n1 = item.value("count_g1", std::int64_t{0});
        f.table.n2 = item.value("count_g2", std::int64_t{0});
        // group sizes are not part of the findings schema; keep the table valid
        f.table.N1 = std::max<std::int64_t>(1, f.table.n1);
        f.table.N2 = std::max<std::int64_t>(1, f.table.n2);
        f.p_value = item.value("p_value", 1.0);
        f.direction = item.value("direction", std::string("g1")) == "g2" ? Direction::G2
                                                                         : Direction::G1;
        findings.push_back(std::move(f));
    }
    return findings;
}

void write_scores(const ScoreReport& report, const std::string& path) {
    nlohmann::json j = {{"mode", to_string(report.mode)},
                        {"precision", report.scores.precision},
                        {"recall", report.scores.recall},
                        {"f1", report.scores.f1}};
    if (!report.per_band.empty()) {
        nlohmann::json bands = nlohmann::json::object();
        for (const auto& [band, recall] : report.per_band) bands[to_string(band)] = recall;
        j["per_band"] = std::move(bands);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace spotlight
