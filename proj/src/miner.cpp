#include "spotlight/miner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <thread>

namespace spotlight {

namespace {

struct Bits {
    std::vector<std::uint64_t> words;

    static Bits zeros(std::size_t n_docs) {
        Bits b;
        b.words.assign((n_docs + 63) / 64, 0);
        return b;
    }
    void set(std::size_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
    std::int64_t count() const {
        std::int64_t c = 0;
        for (std::uint64_t w : words) c += std::popcount(w);
        return c;
    }
    static Bits intersect(const Bits& a, const Bits& b) {
        Bits out = a;
        for (std::size_t i = 0; i < out.words.size(); ++i) out.words[i] &= b.words[i];
        return out;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words.size(); ++wi) {
            std::uint64_t w = words[wi];
            while (w) {
                const int bit = std::countr_zero(w);
                if (!fn(wi * 64 + static_cast<std::size_t>(bit))) return;
                w &= w - 1;
            }
        }
    }
};

struct Scored {
    std::vector<std::uint32_t> ids;
    Bits b1, b2;
    std::int64_t n1 = 0, n2 = 0;
    double z = 0.0, p = 1.0, rate = 0.0;
};

template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t lo = n * t / workers;
            const std::size_t hi = n * (t + 1) / workers;
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

Contingency table_of(const Scored& s, std::int64_t N1, std::int64_t N2) {
    return Contingency{s.n1, N1, s.n2, N2};
}

bool is_subset(const std::vector<std::uint32_t>& small, const std::vector<std::uint32_t>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

std::int64_t MinerConfig::resolved_min_support(std::int64_t total_docs) const {
    if (min_support > 0) return min_support;
    const auto frac = static_cast<std::int64_t>(
        std::ceil(0.01 * static_cast<double>(total_docs)));
    return std::max<std::int64_t>(5, frac);
}

std::string to_string(Direction d) { return d == Direction::G1 ? "g1" : "g2"; }

MineResult mine(const Group& g1, const Group& g2, const MinerConfig& cfg) {
    if (g1.size() < 2 || g2.size() < 2) {
        throw DataError("mine requires at least 2 documents per group");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    if (cfg.max_len < 1 || cfg.beam_width < 1) {
        throw std::invalid_argument("max_len and beam_width must be >= 1");
    }

    const std::int64_t N1 = static_cast<std::int64_t>(g1.size());
    const std::int64_t N2 = static_cast<std::int64_t>(g2.size());
    const std::int64_t min_support = cfg.resolved_min_support(N1 + N2);

    MineResult result;

    // Vocabulary postings for tokens at or above the support floor, lex order.
    std::map<std::string, std::pair<Bits, Bits>> postings;
    for (std::size_t d = 0; d < g1.texts.size(); ++d) {
        for (const std::string& tok : g1.texts[d].token_set) {
            auto it = postings.try_emplace(tok, Bits::zeros(g1.size()), Bits::zeros(g2.size())).first;
            it->second.first.set(d);
        }
    }
    for (std::size_t d = 0; d < g2.texts.size(); ++d) {
        for (const std::string& tok : g2.texts[d].token_set) {
            auto it = postings.try_emplace(tok, Bits::zeros(g1.size()), Bits::zeros(g2.size())).first;
            it->second.second.set(d);
        }
    }
    std::vector<std::string> tokens;
    std::vector<const std::pair<Bits, Bits>*> token_bits;
    for (const auto& [tok, bits] : postings) {
        if (bits.first.count() + bits.second.count() >= min_support) {
            tokens.push_back(tok);
            token_bits.push_back(&bits);
        }
    }
    if (tokens.empty()) {
        result.warnings.push_back("no candidate tokens reach min_support " +
                                  std::to_string(min_support));
        return result;
    }

    const auto score_pattern = [&](Scored& s) {
        s.n1 = s.b1.count();
        s.n2 = s.b2.count();
        const Contingency c = table_of(s, N1, N2);
        s.z = standardized_effect(c);
        s.rate = rate_difference(c);
    };

    // |z| of an arbitrary pattern, for the non-redundancy margin.
    const auto abs_z_of = [&](const std::vector<std::uint32_t>& ids) {
        Bits b1 = token_bits[ids[0]]->first;
        Bits b2 = token_bits[ids[0]]->second;
        for (std::size_t i = 1; i < ids.size(); ++i) {
            b1 = Bits::intersect(b1, token_bits[ids[i]]->first);
            b2 = Bits::intersect(b2, token_bits[ids[i]]->second);
        }
        return std::abs(standardized_effect(Contingency{b1.count(), N1, b2.count(), N2}));
    };

    // Level 1: every vocabulary token.
    std::vector<Scored> level(tokens.size());
    parallel_for(tokens.size(), cfg.threads, [&](std::size_t i) {
        Scored& s = level[i];
        s.ids = {static_cast<std::uint32_t>(i)};
        s.b1 = token_bits[i]->first;
        s.b2 = token_bits[i]->second;
        score_pattern(s);
        s.p = fisher_two_sided(table_of(s, N1, N2));
    });

    std::vector<Scored> pool = level;
    std::set<std::vector<std::uint32_t>> seen;
    for (const Scored& s : level) seen.insert(s.ids);

    for (int len = 2; len <= cfg.max_len && !level.empty(); ++len) {
        // Beam: strongest |z| first, lexicographic patterns break ties.
        std::vector<const Scored*> beam;
        beam.reserve(level.size());
        for (const Scored& s : level) beam.push_back(&s);
        std::sort(beam.begin(), beam.end(), [](const Scored* a, const Scored* b) {
            const double za = std::abs(a->z), zb = std::abs(b->z);
            if (za != zb) return za > zb;
            return a->ids < b->ids;
        });
        if (beam.size() > static_cast<std::size_t>(cfg.beam_width)) {
            beam.resize(static_cast<std::size_t>(cfg.beam_width));
        }

        std::vector<std::vector<Scored>> per_parent(beam.size());
        parallel_for(beam.size(), cfg.threads, [&](std::size_t bi) {
            const Scored& parent = *beam[bi];
            for (std::uint32_t t = 0; t < tokens.size(); ++t) {
                if (std::binary_search(parent.ids.begin(), parent.ids.end(), t)) continue;
                Scored ext;
                ext.ids = parent.ids;
                ext.ids.insert(std::upper_bound(ext.ids.begin(), ext.ids.end(), t), t);
                ext.b1 = Bits::intersect(parent.b1, token_bits[t]->first);
                ext.b2 = Bits::intersect(parent.b2, token_bits[t]->second);
                score_pattern(ext);
                if (ext.n1 + ext.n2 < min_support) continue;
                // Non-redundancy: must beat every immediate sub-pattern by margin.
                double best_sub = 0.0;
                for (std::size_t drop = 0; drop < ext.ids.size(); ++drop) {
                    std::vector<std::uint32_t> sub = ext.ids;
                    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                    best_sub = std::max(best_sub, sub == parent.ids ? std::abs(parent.z)
                                                                    : abs_z_of(sub));
                }
                if (std::abs(ext.z) < best_sub + cfg.margin) continue;
                ext.p = fisher_two_sided(table_of(ext, N1, N2));
                per_parent[bi].push_back(std::move(ext));
            }
        });

        std::vector<Scored> next;
        for (auto& batch : per_parent) {
            for (Scored& ext : batch) {
                if (seen.insert(ext.ids).second) next.push_back(std::move(ext));
            }
        }
        for (const Scored& s : next) pool.push_back(s);
        level = std::move(next);
    }

    // Keep candidates whose exact test clears alpha.
    std::vector<const Scored*> selected;
    for (const Scored& s : pool) {
        if (s.p <= cfg.alpha) selected.push_back(&s);
    }

    // Drop supersets dominated by an equally strong sub-pattern.
    std::vector<char> removed(selected.size(), 0);
    for (std::size_t i = 0; i < selected.size(); ++i) {
        for (std::size_t j = 0; j < selected.size(); ++j) {
            if (i == j || removed[i]) continue;
            if (selected[j]->ids.size() < selected[i]->ids.size() &&
                is_subset(selected[j]->ids, selected[i]->ids) &&
                std::abs(selected[j]->z) >= std::abs(selected[i]->z)) {
                removed[i] = 1;
            }
        }
    }
    // Drop sub-patterns covered by a surviving stronger superset.
    std::vector<char> removed2 = removed;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (removed[i]) continue;
        const double docs_i = static_cast<double>(selected[i]->n1 + selected[i]->n2);
        for (std::size_t j = 0; j < selected.size(); ++j) {
            if (i == j || removed[j]) continue;
            if (selected[i]->ids.size() < selected[j]->ids.size() &&
                is_subset(selected[i]->ids, selected[j]->ids) &&
                std::abs(selected[j]->z) > std::abs(selected[i]->z) &&
                static_cast<double>(selected[j]->n1 + selected[j]->n2) >= 0.9 * docs_i) {
                removed2[i] = 1;
            }
        }
    }

    std::vector<const Scored*> kept;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (!removed2[i]) kept.push_back(selected[i]);
    }
    std::sort(kept.begin(), kept.end(), [](const Scored* a, const Scored* b) {
        if (a->p != b->p) return a->p < b->p;
        const double ra = std::abs(a->rate), rb = std::abs(b->rate);
        if (ra != rb) return ra > rb;
        return a->ids < b->ids;
    });

    for (const Scored* s : kept) {
        PatternFinding f;
        std::vector<std::string> toks;
        toks.reserve(s->ids.size());
        for (std::uint32_t id : s->ids) toks.push_back(tokens[id]);
        f.pattern = TokenPattern::of(std::move(toks));
        f.table = table_of(*s, N1, N2);
        f.p_value = s->p;
        f.direction = s->rate < 0.0 ? Direction::G2 : Direction::G1;
        f.score = s->z;
        const Bits& bits = f.direction == Direction::G1 ? s->b1 : s->b2;
        const Group& favored = f.direction == Direction::G1 ? g1 : g2;
        const GroupLabel label = f.direction == Direction::G1 ? GroupLabel::G1 : GroupLabel::G2;
        bits.for_each([&](std::size_t d) {
            f.examples.push_back({label, favored.texts[d].source_id});
            return f.examples.size() < 3;
        });
        result.findings.push_back(std::move(f));
    }
    return result;
}

}  // namespace spotlight
