#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamllm/model.hpp"

namespace streamllm {

// Placeholders substituted at render time.
inline constexpr const char* kModelTextPlaceholder = "{MODEL_TEXT}";
inline constexpr const char* kFeedbackPlaceholder = "{FEEDBACK}";

struct PromptSection {
    std::string heading;
    std::string body;
};

// An ordered list of (heading, body) blocks. The four variants differ in
// which blocks they carry:
//   P1 - full task description: objective, six steps, compliance rules
//   P2 - P1 with the feedback-loop steps removed
//   P3 - minimal request for five constraints in the keyed output format
//   P4 - P1 without naming implied/symmetry/dominance-breaking constraints
struct PromptTemplate {
    PromptVariant variant = PromptVariant::P1;
    std::vector<PromptSection> sections;

    static PromptTemplate for_variant(PromptVariant v);
};

// Pure substitution: {MODEL_TEXT} becomes the model source, {FEEDBACK}
// becomes the feedback text or its whole section is dropped when absent.
// Same inputs give a byte-identical prompt.
std::string render_prompt(const PromptTemplate& tmpl, const ConstraintModel& model,
                          const std::optional<std::string>& feedback);

}  // namespace streamllm
