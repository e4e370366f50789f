#include "streamllm/model.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

constexpr const char* kGlobalsInclude = "include \"globals.mzn\";";

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c));
}

}  // namespace

const char* to_string(PromptVariant v) {
    switch (v) {
        case PromptVariant::P1: return "p1";
        case PromptVariant::P2: return "p2";
        case PromptVariant::P3: return "p3";
        case PromptVariant::P4: return "p4";
    }
    return "p1";
}

std::optional<PromptVariant> prompt_variant_from_string(const std::string& s) {
    if (s == "p1" || s == "P1") return PromptVariant::P1;
    if (s == "p2" || s == "P2") return PromptVariant::P2;
    if (s == "p3" || s == "P3") return PromptVariant::P3;
    if (s == "p4" || s == "P4") return PromptVariant::P4;
    return std::nullopt;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Sat: return "SAT";
        case SolveStatus::Unsat: return "UNSAT";
        case SolveStatus::Timeout: return "TIMEOUT";
        case SolveStatus::Error: return "ERROR";
    }
    return "ERROR";
}

std::optional<SolveStatus> solve_status_from_string(const std::string& s) {
    if (s == "SAT") return SolveStatus::Sat;
    if (s == "UNSAT") return SolveStatus::Unsat;
    if (s == "TIMEOUT") return SolveStatus::Timeout;
    if (s == "ERROR") return SolveStatus::Error;
    return std::nullopt;
}

const char* to_string(GenerationMode m) {
    return m == GenerationMode::Static ? "static" : "adaptive";
}

void GenerationConfig::validate() const {
    if (n_per_query < 1) throw ConfigError("n_per_query must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (budget_seconds <= 0) throw ConfigError("budget_seconds must be > 0");
    if (t_train_floor >= t_train_cap) throw ConfigError("t_train_floor must be < t_train_cap");
    if (n_train < 1) throw ConfigError("n_train must be >= 1");
    if (max_parallel_solves < 1) throw ConfigError("max_parallel_solves must be >= 1");
}

ConstraintModel compose_streamlined_model(const ConstraintModel& model, const Streamliner& s) {
    ConstraintModel out;
    out.name = model.name + "+" + s.id;
    out.origin_path = "inline";
    const bool has_globals = model.source_text.find(kGlobalsInclude) != std::string::npos;
    if (!has_globals) {
        out.source_text = std::string(kGlobalsInclude) + "\n";
    }
    out.source_text += model.source_text;
    out.source_text += "\n";
    out.source_text += s.constraint_text;
    return out;
}

std::optional<std::string> normalize_streamliner(const std::string& raw_text) {
    // Trim and collapse internal whitespace runs to single spaces.
    std::string text;
    text.reserve(raw_text.size());
    bool pending_space = false;
    for (char c : raw_text) {
        if (is_space(c)) {
            if (!text.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            text.push_back(' ');
            pending_space = false;
        }
        text.push_back(c);
    }
    // Must begin with the token "constraint" (not merely the prefix).
    static const std::string kToken = "constraint";
    if (text.compare(0, kToken.size(), kToken) != 0) return std::nullopt;
    if (text.size() > kToken.size() && is_ident_char(text[kToken.size()])) return std::nullopt;
    if (text.empty() || text.back() != ';') text.push_back(';');
    return text;
}

std::vector<Streamliner> dedup_candidates(const std::vector<std::string>& existing_texts,
                                          const std::vector<Streamliner>& incoming) {
    std::unordered_set<std::string> seen(existing_texts.begin(), existing_texts.end());
    std::vector<Streamliner> fresh;
    for (const auto& s : incoming) {
        if (seen.insert(s.constraint_text).second) fresh.push_back(s);
    }
    return fresh;
}

}  // namespace streamllm
