#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streamllm/model.hpp"

namespace streamllm {

enum class TokenKind {
    Identifier,
    QuotedIdentifier,
    Number,
    String,
    LineComment,
    BlockComment,
    Other  // operators, punctuation, whitespace
};

struct Token {
    TokenKind kind;
    std::size_t begin;
    std::size_t end;  // one past the last byte
};

// Lexes MiniZinc source into contiguous byte spans. Throws ObfuscationError
// with the offending position for unterminated strings or comments.
std::vector<Token> tokenize_minizinc(const std::string& text);

bool is_minizinc_keyword(const std::string& word);
// Standard library and globals names, loaded from the bundled builtin list.
bool is_minizinc_builtin(const std::string& word);

// Injective original -> "id<N>" assignment, in seeded-random number order so
// the fresh names carry no positional hints.
struct RenameMap {
    std::vector<std::pair<std::string, std::string>> pairs;  // first-occurrence order
    std::uint64_t seed = 0;

    std::map<std::string, std::string> forward() const;
    std::map<std::string, std::string> inverse() const;
    // Two-column text form, one pair per line.
    std::string to_text() const;
    static RenameMap from_text(const std::string& text);
};

struct ObfuscationResult {
    ConstraintModel model;
    RenameMap map;
    std::vector<DataInstance> data;
};

// Replaces every user-defined identifier via the mapping and optionally
// drops comments; all other bytes pass through untouched.
std::string apply_rename(const std::string& text,
                         const std::map<std::string, std::string>& mapping,
                         bool strip_comments);

// Comment-free rendition of the text, byte-identical otherwise.
std::string strip_comments_text(const std::string& text);

// Renames every user-defined identifier in the model (keywords, builtins,
// and string literals untouched), strips comments unless told otherwise,
// and rewrites companion data files with the same map so parameter names
// keep matching.
ObfuscationResult obfuscate(const ConstraintModel& model, std::uint64_t seed,
                            const std::vector<DataInstance>& companion_data,
                            bool strip_comments = true);

}  // namespace streamllm
