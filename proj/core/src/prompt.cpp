#include "streamllm/prompt.hpp"

namespace streamllm {

namespace {

const char* kObjectiveFull =
    "Analyze the given MiniZinc code and suggest five additional constraints to enhance the "
    "problem-solving process. These constraints can include streamlining, implied, "
    "symmetry-breaking, or dominance-breaking constraints.";

// P4 drops the sentence naming the constraint families.
const char* kObjectivePlain =
    "Analyze the given MiniZinc code and suggest five additional constraints to enhance the "
    "problem-solving process.";

const char* kOutputStructure =
    "{\"streamliner_1\": \"constraint <MiniZinc constraint>\", ..., "
    "\"streamliner_5\": \"constraint <MiniZinc constraint>\"}";

std::string steps_body(bool with_feedback_steps) {
    std::string s;
    s += "1. Analyze Content: Read the provided MiniZinc code. Understand the problem being "
         "addressed, including its variables, constraints, and optimization goals.\n\n";
    s += "2. Generate additional Constraints: Based on your analysis, create five unique "
         "constraints. These should offer targeted modifications or restrictions designed to "
         "reduce the search space effectively.\n\n";
    s += "3. Always return your constraints as a JSON object, adhering to the structure: ";
    s += kOutputStructure;
    s += ". Your final output should exclusively be the JSON object containing the five "
         "constraints.";
    if (with_feedback_steps) {
        s += "\n\n4. As a response, you will get feedback for each constraint. Some constraints "
             "might lead to errors, timeouts, or unsatisfiable instances.\n\n";
        s += "5. Use the information provided in the previous step to generate five new, and "
             "hopefully better constraints.\n\n";
        s += "6. Repeat steps 3 to 5 multiple times.";
    }
    return s;
}

std::string compliance_body() {
    std::string s;
    s += "1. Response Format: Your final output should exclusively be the JSON object containing "
         "the five constraints, adhering to the structure: ";
    s += kOutputStructure;
    s += ". Do not forget the semicolon at the end of the constraint!\n\n";
    s += "2. Code Quality: All MiniZinc code provided for the constraints must be syntactically "
         "correct and functional. For some functions you may need to include an additional "
         "library.\n\n";
    s += "3. Creativity: You're encouraged to be innovative in proposing constraints, keeping in "
         "mind their purpose: to narrow down the search space efficiently without "
         "oversimplifying the problem.";
    return s;
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

}  // namespace

PromptTemplate PromptTemplate::for_variant(PromptVariant v) {
    PromptTemplate t;
    t.variant = v;
    switch (v) {
        case PromptVariant::P1:
            t.sections = {{"Objective", kObjectiveFull},
                          {"Steps", steps_body(true)},
                          {"Compliance Rules", compliance_body()},
                          {"Feedback", kFeedbackPlaceholder},
                          {"MiniZinc Model", kModelTextPlaceholder}};
            break;
        case PromptVariant::P2:
            t.sections = {{"Objective", kObjectiveFull},
                          {"Steps", steps_body(false)},
                          {"Compliance Rules", compliance_body()},
                          {"Feedback", kFeedbackPlaceholder},
                          {"MiniZinc Model", kModelTextPlaceholder}};
            break;
        case PromptVariant::P3:
            t.sections = {{"Task",
                           std::string("Suggest five additional streamlining constraints for the "
                                       "given MiniZinc model. Return exclusively a JSON object "
                                       "adhering to the structure: ") +
                               kOutputStructure +
                               ". Do not forget the semicolon at the end of the constraint!"},
                          {"Feedback", kFeedbackPlaceholder},
                          {"MiniZinc Model", kModelTextPlaceholder}};
            break;
        case PromptVariant::P4:
            t.sections = {{"Objective", kObjectivePlain},
                          {"Steps", steps_body(true)},
                          {"Compliance Rules", compliance_body()},
                          {"Feedback", kFeedbackPlaceholder},
                          {"MiniZinc Model", kModelTextPlaceholder}};
            break;
    }
    return t;
}

std::string render_prompt(const PromptTemplate& tmpl, const ConstraintModel& model,
                          const std::optional<std::string>& feedback) {
    std::string out;
    for (const auto& section : tmpl.sections) {
        if (section.body == kFeedbackPlaceholder && !feedback.has_value()) continue;
        std::string body = replace_all(section.body, kModelTextPlaceholder, model.source_text);
        if (feedback.has_value()) {
            body = replace_all(body, kFeedbackPlaceholder, *feedback);
        }
        if (!out.empty()) out += "\n";
        out += section.heading + "\n\n" + body + "\n";
    }
    return out;
}

}  // namespace streamllm
