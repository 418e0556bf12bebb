#include "spotlight/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

namespace spotlight {

namespace {

constexpr char kSplitPunct[] = ".,!?;:\"'()[]{}|";

bool is_split_punct(char32_t cp) {
    if (cp > 0x7f) return false;
    for (const char* p = kSplitPunct; *p; ++p) {
        if (static_cast<char32_t>(*p) == cp) return true;
    }
    return false;
}

bool is_space_cp(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case 0x0b: case 0x0c:
        case 0xa0: case 0x1680: case 0x2028: case 0x2029: case 0x202f:
        case 0x205f: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200b;
    }
}

bool is_emoji_cp(char32_t cp) {
    return (cp >= 0x1f000 && cp <= 0x1faff) || (cp >= 0x2600 && cp <= 0x27bf) ||
           (cp >= 0x2b00 && cp <= 0x2bff);
}

std::vector<char32_t> decode_utf8(const std::string& text) {
    std::vector<char32_t> cps;
    cps.reserve(text.size());
    std::size_t i = 0;
    const auto fail = [&] { throw DataError("invalid UTF-8 at byte " + std::to_string(i)); };
    while (i < text.size()) {
        const unsigned char b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xe0) == 0xc0) {
            cp = b0 & 0x1f;
            len = 2;
        } else if ((b0 & 0xf0) == 0xe0) {
            cp = b0 & 0x0f;
            len = 3;
        } else if ((b0 & 0xf8) == 0xf0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail();
        }
        if (i + len > text.size()) fail();
        for (std::size_t k = 1; k < len; ++k) {
            const unsigned char b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xc0) != 0x80) fail();
            cp = (cp << 6) | (b & 0x3f);
        }
        if (len == 2 && cp < 0x80) fail();
        if (len == 3 && cp < 0x800) fail();
        if (len == 4 && cp < 0x10000) fail();
        if (cp > 0x10ffff) fail();
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

std::string encode_range(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) encode_utf8(cps[i], out);
    return out;
}

// Splits one punctuation-bearing segment (no whitespace, no emoji) into tokens.
void emit_segment(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end,
                  std::vector<std::string>& out) {
    if (begin >= end) return;
    std::size_t core_begin = begin;
    while (core_begin < end && is_split_punct(cps[core_begin])) ++core_begin;
    if (core_begin == end) {
        // all punctuation: keep the run whole ("||", "...", ":)")
        out.push_back(encode_range(cps, begin, end));
        return;
    }
    std::size_t core_end = end;
    while (core_end > core_begin && is_split_punct(cps[core_end - 1])) --core_end;
    for (std::size_t i = begin; i < core_begin; ++i) out.push_back(encode_range(cps, i, i + 1));
    out.push_back(encode_range(cps, core_begin, core_end));
    for (std::size_t i = core_end; i < end; ++i) out.push_back(encode_range(cps, i, i + 1));
}

void emit_word(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end,
               std::vector<std::string>& out) {
    std::size_t seg = begin;
    for (std::size_t i = begin; i < end; ++i) {
        if (is_emoji_cp(cps[i])) {
            emit_segment(cps, seg, i, out);
            out.push_back(encode_range(cps, i, i + 1));
            seg = i + 1;
        }
    }
    emit_segment(cps, seg, end, out);
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace

std::string to_string(GroupLabel label) {
    switch (label) {
        case GroupLabel::G1: return "G1";
        case GroupLabel::G2: return "G2";
        case GroupLabel::Base: return "BASE";
    }
    return "?";
}

TokenSequence TokenSequence::from_tokens(std::vector<std::string> tokens, std::size_t source_id) {
    TokenSequence seq;
    seq.tokens = std::move(tokens);
    seq.token_set = seq.tokens;
    std::sort(seq.token_set.begin(), seq.token_set.end());
    seq.token_set.erase(std::unique(seq.token_set.begin(), seq.token_set.end()),
                        seq.token_set.end());
    seq.source_id = source_id;
    return seq;
}

bool TokenSequence::contains(const std::string& token) const {
    return std::binary_search(token_set.begin(), token_set.end(), token);
}

TokenPattern TokenPattern::of(std::vector<std::string> tokens) {
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    if (tokens.empty()) throw std::invalid_argument("TokenPattern must be non-empty");
    TokenPattern p;
    p.tokens = std::move(tokens);
    return p;
}

std::vector<std::string> tokenize_text(const std::string& text) {
    const std::vector<char32_t> cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space_cp(cps[i])) ++i;
        std::size_t begin = i;
        while (i < cps.size() && !is_space_cp(cps[i])) ++i;
        if (i > begin) emit_word(cps, begin, i, tokens);
    }
    return tokens;
}

TokenSequence tokenize(const std::string& text, std::size_t source_id) {
    return TokenSequence::from_tokens(tokenize_text(text), source_id);
}

CorpusFormat parse_corpus_format(const std::string& name) {
    if (name == "jsonl") return CorpusFormat::Jsonl;
    if (name == "lines") return CorpusFormat::Lines;
    throw std::invalid_argument("unknown corpus format: " + name);
}

Group load_group(const std::string& path, CorpusFormat format, GroupLabel label,
                 LoadStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);

    Group group;
    group.label = label;
    group.provenance = path;
    LoadStats local;

    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string text;
        if (format == CorpusFormat::Jsonl) {
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const nlohmann::json::parse_error& e) {
                throw DataError(path + ": malformed JSON at line " + std::to_string(record + 1) +
                                ": " + e.what());
            }
            if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string()) {
                throw DataError(path + ": line " + std::to_string(record + 1) +
                                " lacks a string \"text\" key");
            }
            text = obj["text"].get<std::string>();
        } else {
            text = line;
        }
        TokenSequence seq = tokenize(text, record);
        ++local.records;
        if (seq.tokens.empty()) {
            ++local.dropped_empty;
        } else {
            group.texts.push_back(std::move(seq));
        }
        ++record;
    }
    if (in.bad()) throw DataError("I/O error while reading " + path);
    if (group.texts.empty()) throw DataError(path + ": no usable documents");
    if (stats) *stats = local;
    return group;
}

void write_group(const Group& group, const std::string& path, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    for (const TokenSequence& seq : group.texts) {
        const std::string text = join_tokens(seq.tokens);
        if (format == CorpusFormat::Jsonl) {
            nlohmann::json obj;
            obj["text"] = text;
            out << obj.dump() << '\n';
        } else {
            out << text << '\n';
        }
    }
    if (!out) throw DataError("I/O error while writing " + path);
}

bool occurs(const TokenPattern& pattern, const TokenSequence& text) {
    for (const std::string& token : pattern.tokens) {
        if (!text.contains(token)) return false;
    }
    return true;
}

std::int64_t support(const TokenPattern& pattern, const Group& group) {
    std::int64_t count = 0;
    for (const TokenSequence& text : group.texts) {
        if (occurs(pattern, text)) ++count;
    }
    return count;
}

std::vector<VocabEntry> vocabulary(const Group& g1, const Group& g2, std::int64_t min_support) {
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;
    for (const TokenSequence& text : g1.texts) {
        for (const std::string& token : text.token_set) counts[token].first++;
    }
    for (const TokenSequence& text : g2.texts) {
        for (const std::string& token : text.token_set) counts[token].second++;
    }
    std::vector<VocabEntry> entries;
    entries.reserve(counts.size());
    for (const auto& [token, c] : counts) {
        if (c.first + c.second >= min_support) entries.push_back({token, c.first, c.second});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
        const auto ta = a.support_g1 + a.support_g2;
        const auto tb = b.support_g1 + b.support_g2;
        if (ta != tb) return ta > tb;
        return a.token < b.token;
    });
    return entries;
}

}  // namespace spotlight
