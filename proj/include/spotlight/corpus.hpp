#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotlight {

/// Raised for unusable input data (bad files, malformed records, empty groups).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GroupLabel { G1, G2, Base };

std::string to_string(GroupLabel label);

/// One document: an ordered token list plus its deduplicated token set.
struct TokenSequence {
    std::vector<std::string> tokens;
    std::vector<std::string> token_set;  // sorted, unique
    std::size_t source_id = 0;

    static TokenSequence from_tokens(std::vector<std::string> tokens, std::size_t source_id);

    bool contains(const std::string& token) const;
};

/// A set of documents from one source (G1, G2, or an untransformed base corpus).
struct Group {
    std::vector<TokenSequence> texts;
    GroupLabel label = GroupLabel::Base;
    std::string provenance;

    std::size_t size() const { return texts.size(); }
};

/// An unordered set of tokens; occurs in a document when it is a subset of the
/// document's token set.
struct TokenPattern {
    std::vector<std::string> tokens;  // sorted, unique, non-empty

    static TokenPattern of(std::vector<std::string> tokens);

    std::size_t size() const { return tokens.size(); }
    bool operator==(const TokenPattern& other) const { return tokens == other.tokens; }
    bool operator<(const TokenPattern& other) const { return tokens < other.tokens; }
};

/// Whitespace split, then leading/trailing punctuation characters become
/// separate tokens. Words made entirely of punctuation stay whole, emoji
/// codepoints always stand alone, contractions and hyphenated words are kept.
/// Case is preserved. The token list is a fixed point: joining with single
/// spaces and re-tokenizing reproduces it.
std::vector<std::string> tokenize_text(const std::string& text);

/// tokenize_text wrapped into a TokenSequence (source_id defaults to 0).
TokenSequence tokenize(const std::string& text, std::size_t source_id = 0);

enum class CorpusFormat { Jsonl, Lines };

CorpusFormat parse_corpus_format(const std::string& name);

struct LoadStats {
    std::size_t records = 0;
    std::size_t dropped_empty = 0;
};

/// Reads a corpus file into a Group. jsonl lines must carry a "text" string
/// key; lines files hold one document per line. Records that tokenize to
/// nothing are dropped and counted in stats. source_id is the zero-based
/// record index in the file.
Group load_group(const std::string& path, CorpusFormat format, GroupLabel label,
                 LoadStats* stats = nullptr);

/// Inverse of load_group for well-formed groups: one record per text, tokens
/// joined with single spaces.
void write_group(const Group& group, const std::string& path, CorpusFormat format);

/// True iff every token of the pattern is present in the document.
bool occurs(const TokenPattern& pattern, const TokenSequence& text);

/// Number of documents in the group containing the pattern (each document
/// counted once).
std::int64_t support(const TokenPattern& pattern, const Group& group);

struct VocabEntry {
    std::string token;
    std::int64_t support_g1 = 0;
    std::int64_t support_g2 = 0;
};

/// All tokens whose combined document support reaches min_support, sorted by
/// total support descending, ties lexicographic.
std::vector<VocabEntry> vocabulary(const Group& g1, const Group& g2, std::int64_t min_support);

}  // namespace spotlight
