#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace streamllm {

// The unstreamlined MiniZinc model text plus metadata. Immutable value
// object; composed variants get a fresh name.
struct ConstraintModel {
    std::string name;
    std::string source_text;
    std::string origin_path = "inline";
};

enum class InstanceRole { Training, Test };

// One problem instance (a .dzn data file). baseline_seconds is unset until
// the instance has been graded with the unstreamlined model.
struct DataInstance {
    std::string id;
    std::string data_text;
    InstanceRole role = InstanceRole::Training;
    std::optional<double> baseline_seconds;
};

enum class PromptVariant { P1, P2, P3, P4 };

const char* to_string(PromptVariant v);
std::optional<PromptVariant> prompt_variant_from_string(const std::string& s);

// Where a candidate came from: which provider, which prompt variant, which
// loop iteration, and which slot key ("streamliner_3") in the response.
struct StreamlinerOrigin {
    std::string provider;
    PromptVariant variant = PromptVariant::P1;
    int iteration = 0;
    std::string slot_key;
};

// One candidate constraint. constraint_text is a single normalized
// top-level item: starts with the token "constraint", ends with ";".
struct Streamliner {
    std::string id;
    std::string constraint_text;
    StreamlinerOrigin origin;
};

enum class SolveStatus { Sat, Unsat, Timeout, Error };

const char* to_string(SolveStatus s);
std::optional<SolveStatus> solve_status_from_string(const std::string& s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::Error;
    double wall_seconds = 0.0;
    std::string detail;  // stderr excerpt or sentinel seen
};

enum class GenerationMode { Static, Adaptive };

const char* to_string(GenerationMode m);

struct GenerationConfig {
    GenerationMode mode = GenerationMode::Static;
    int n_per_query = 5;
    int k = 3;
    double budget_seconds = 600.0;
    double t_train_cap = 10.0;
    double t_train_floor = 1.0;
    int n_train = 15;
    PromptVariant prompt_variant = PromptVariant::P1;
    std::string provider = "fixture";
    int max_parallel_solves = 4;

    // Throws ConfigError if any invariant is violated.
    void validate() const;
};

// Appends the streamliner after the original text and injects an
// `include "globals.mzn";` header when the model does not already have one.
// The original text is preserved verbatim as a contiguous block.
ConstraintModel compose_streamlined_model(const ConstraintModel& model, const Streamliner& s);

// Canonical form of a raw candidate: whitespace trimmed and collapsed,
// trailing ";" ensured. Returns nullopt (REJECT) for text that is not a
// top-level constraint item.
std::optional<std::string> normalize_streamliner(const std::string& raw_text);

// Drops incoming candidates whose normalized text equals any existing or
// earlier-incoming item; order preserved. Inputs must be normalized.
std::vector<Streamliner> dedup_candidates(const std::vector<std::string>& existing_texts,
                                          const std::vector<Streamliner>& incoming);

}  // namespace streamllm
