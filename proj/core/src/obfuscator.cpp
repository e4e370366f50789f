#include "streamllm/obfuscator.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_set>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace detail {
const char* minizinc_builtins_raw();  // generated from core/data/minizinc_builtins.txt
}

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool digit(char c) {
    return std::isdigit(static_cast<unsigned char>(c));
}

const std::unordered_set<std::string>& keyword_set() {
    static const std::unordered_set<std::string> kKeywords = {
        "ann",      "annotation", "any",      "array",   "bool",    "case",   "constraint",
        "default",  "diff",       "div",      "else",    "elseif",  "endif",  "enum",
        "false",    "float",      "function", "if",      "in",      "include", "int",
        "intersect", "let",       "list",     "maximize", "minimize", "mod",   "not",
        "of",       "op",         "opt",      "output",  "par",     "predicate", "record",
        "satisfy",  "set",        "solve",    "string",  "subset",  "superset", "symdiff",
        "test",     "then",       "true",     "tuple",   "type",    "union",  "var",
        "where",    "xor"};
    return kKeywords;
}

const std::unordered_set<std::string>& builtin_set() {
    static const std::unordered_set<std::string> kBuiltins = [] {
        std::unordered_set<std::string> names;
        std::istringstream in(detail::minizinc_builtins_raw());
        std::string line;
        while (std::getline(in, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream words(line);
            std::string word;
            while (words >> word) names.insert(word);
        }
        return names;
    }();
    return kBuiltins;
}

}  // namespace

bool is_minizinc_keyword(const std::string& word) { return keyword_set().count(word) > 0; }
bool is_minizinc_builtin(const std::string& word) { return builtin_set().count(word) > 0; }

std::vector<Token> tokenize_minizinc(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto other_run_start = std::string::npos;
    auto flush_other = [&](std::size_t end) {
        if (other_run_start != std::string::npos) {
            tokens.push_back({TokenKind::Other, other_run_start, end});
            other_run_start = std::string::npos;
        }
    };

    while (i < n) {
        const char c = text[i];
        if (ident_start(c)) {
            flush_other(i);
            std::size_t begin = i;
            while (i < n && ident_char(text[i])) ++i;
            tokens.push_back({TokenKind::Identifier, begin, i});
        } else if (digit(c)) {
            flush_other(i);
            std::size_t begin = i;
            if (c == '0' && i + 1 < n && (text[i + 1] == 'x' || text[i + 1] == 'o')) {
                i += 2;
                while (i < n && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
            } else {
                while (i < n && digit(text[i])) ++i;
                // Fraction, but not the ".." range operator.
                if (i + 1 < n && text[i] == '.' && digit(text[i + 1])) {
                    ++i;
                    while (i < n && digit(text[i])) ++i;
                }
                if (i < n && (text[i] == 'e' || text[i] == 'E')) {
                    std::size_t mark = i + 1;
                    if (mark < n && (text[mark] == '+' || text[mark] == '-')) ++mark;
                    if (mark < n && digit(text[mark])) {
                        i = mark;
                        while (i < n && digit(text[i])) ++i;
                    }
                }
            }
            tokens.push_back({TokenKind::Number, begin, i});
        } else if (c == '"') {
            flush_other(i);
            std::size_t begin = i++;
            bool escaped = false;
            while (i < n && (text[i] != '"' || escaped)) {
                escaped = !escaped && text[i] == '\\';
                ++i;
            }
            if (i >= n) throw ObfuscationError("unterminated string literal", begin);
            tokens.push_back({TokenKind::String, begin, ++i});
        } else if (c == '\'') {
            flush_other(i);
            std::size_t begin = i++;
            while (i < n && text[i] != '\'' && text[i] != '\n') ++i;
            if (i >= n || text[i] != '\'') {
                throw ObfuscationError("unterminated quoted identifier", begin);
            }
            tokens.push_back({TokenKind::QuotedIdentifier, begin, ++i});
        } else if (c == '%') {
            flush_other(i);
            std::size_t begin = i;
            while (i < n && text[i] != '\n') ++i;
            tokens.push_back({TokenKind::LineComment, begin, i});
        } else if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            flush_other(i);
            std::size_t begin = i;
            i += 2;
            while (i + 1 < n && !(text[i] == '*' && text[i + 1] == '/')) ++i;
            if (i + 1 >= n) throw ObfuscationError("unterminated block comment", begin);
            tokens.push_back({TokenKind::BlockComment, begin, i + 2});
            i += 2;
        } else {
            if (other_run_start == std::string::npos) other_run_start = i;
            ++i;
        }
    }
    flush_other(n);
    return tokens;
}

std::map<std::string, std::string> RenameMap::forward() const {
    return {pairs.begin(), pairs.end()};
}

std::map<std::string, std::string> RenameMap::inverse() const {
    std::map<std::string, std::string> inv;
    for (const auto& [from, to] : pairs) inv.emplace(to, from);
    return inv;
}

std::string RenameMap::to_text() const {
    std::string out;
    for (const auto& [from, to] : pairs) out += from + " " + to + "\n";
    return out;
}

RenameMap RenameMap::from_text(const std::string& text) {
    RenameMap map;
    std::istringstream in(text);
    std::string from, to;
    while (in >> from >> to) map.pairs.emplace_back(from, to);
    return map;
}

std::string apply_rename(const std::string& text,
                         const std::map<std::string, std::string>& mapping,
                         bool strip_comments) {
    std::string out;
    out.reserve(text.size());
    for (const auto& token : tokenize_minizinc(text)) {
        if (token.kind == TokenKind::LineComment || token.kind == TokenKind::BlockComment) {
            if (!strip_comments) out.append(text, token.begin, token.end - token.begin);
            continue;
        }
        if (token.kind == TokenKind::Identifier) {
            const std::string word = text.substr(token.begin, token.end - token.begin);
            auto it = mapping.find(word);
            out += it != mapping.end() ? it->second : word;
            continue;
        }
        out.append(text, token.begin, token.end - token.begin);
    }
    return out;
}

std::string strip_comments_text(const std::string& text) {
    return apply_rename(text, {}, /*strip_comments=*/true);
}

ObfuscationResult obfuscate(const ConstraintModel& model, std::uint64_t seed,
                            const std::vector<DataInstance>& companion_data,
                            bool strip_comments) {
    // Collect user identifiers in first-occurrence order, model first so the
    // map is defined by the model alone.
    std::vector<std::string> user_idents;
    std::set<std::string> seen;
    std::set<std::string> all_idents;  // for target collision avoidance
    auto scan = [&](const std::string& text, bool collect) {
        for (const auto& token : tokenize_minizinc(text)) {
            if (token.kind != TokenKind::Identifier) continue;
            const std::string word = text.substr(token.begin, token.end - token.begin);
            all_idents.insert(word);
            if (!collect || is_minizinc_keyword(word) || is_minizinc_builtin(word)) continue;
            if (seen.insert(word).second) user_idents.push_back(word);
        }
    };
    scan(model.source_text, true);
    for (const auto& d : companion_data) scan(d.data_text, false);

    // Number pool 1..M skipping any id<N> that survives in the text, then a
    // seeded shuffle so fresh names carry no declaration-order hints.
    static const std::regex kFreshName("^id([0-9]+)$");
    std::set<long> taken;
    for (const auto& word : all_idents) {
        std::smatch m;
        if (std::regex_match(word, m, kFreshName) && seen.count(word) == 0) {
            taken.insert(std::stol(m[1].str()));
        }
    }
    std::vector<long> pool;
    for (long next = 1; pool.size() < user_idents.size(); ++next) {
        if (taken.count(next) == 0) pool.push_back(next);
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (pool.size() - i));
        std::swap(pool[i], pool[j]);
    }

    ObfuscationResult result;
    result.map.seed = seed;
    for (std::size_t i = 0; i < user_idents.size(); ++i) {
        result.map.pairs.emplace_back(user_idents[i], "id" + std::to_string(pool[i]));
    }

    const auto forward = result.map.forward();
    result.model.name = model.name + "_obf";
    result.model.origin_path = model.origin_path;
    result.model.source_text = apply_rename(model.source_text, forward, strip_comments);
    for (const auto& d : companion_data) {
        DataInstance renamed = d;
        renamed.data_text = apply_rename(d.data_text, forward, strip_comments);
        result.data.push_back(std::move(renamed));
    }
    return result;
}

}  // namespace streamllm
