#include <doctest.h>

#include "streamllm/prompt.hpp"

using namespace streamllm;

namespace {

const ConstraintModel kModel{"toy", "int: x;\nconstraint x > 0;\nsolve satisfy;", "inline"};

// Frozen task-description fragments the full prompt must carry word for word.
const char* kObjectiveSentence =
    "Analyze the given MiniZinc code and suggest five additional constraints to enhance the "
    "problem-solving process.";
const char* kFamiliesSentence =
    "These constraints can include streamlining, implied, symmetry-breaking, or "
    "dominance-breaking constraints.";
const char* kStructure =
    "{\"streamliner_1\": \"constraint <MiniZinc constraint>\", ..., "
    "\"streamliner_5\": \"constraint <MiniZinc constraint>\"}";
const char* kSemicolonRule = "Do not forget the semicolon at the end of the constraint!";
const char* kFeedbackStep =
    "4. As a response, you will get feedback for each constraint. Some constraints might "
    "lead to errors, timeouts, or unsatisfiable instances.";
const char* kRepeatStep = "6. Repeat steps 3 to 5 multiple times.";
const char* kLibraryRule = "For some functions you may need to include an additional library.";

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("p1 carries the full task description and the model code") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P1);
    std::string prompt = render_prompt(tmpl, kModel, std::nullopt);

    CHECK(contains(prompt, kObjectiveSentence));
    CHECK(contains(prompt, kFamiliesSentence));
    CHECK(contains(prompt, "1. Analyze Content: Read the provided MiniZinc code."));
    CHECK(contains(prompt, "2. Generate additional Constraints:"));
    CHECK(contains(prompt, kStructure));
    CHECK(contains(prompt, kFeedbackStep));
    CHECK(contains(prompt, "5. Use the information provided in the previous step"));
    CHECK(contains(prompt, kRepeatStep));
    CHECK(contains(prompt, "Compliance Rules"));
    CHECK(contains(prompt, kSemicolonRule));
    CHECK(contains(prompt, kLibraryRule));
    CHECK(contains(prompt, kModel.source_text));
    CHECK_FALSE(contains(prompt, "{MODEL_TEXT}"));
    CHECK_FALSE(contains(prompt, "{FEEDBACK}"));
    CHECK_FALSE(contains(prompt, "Feedback\n"));
}

TEST_CASE("rendering is pure") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P1);
    CHECK(render_prompt(tmpl, kModel, std::nullopt) == render_prompt(tmpl, kModel, std::nullopt));
    CHECK(render_prompt(tmpl, kModel, std::string("fb")) ==
          render_prompt(tmpl, kModel, std::string("fb")));
}

TEST_CASE("feedback block lands between the compliance rules and the model") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P1);
    const std::string feedback = "streamliner_2: produced a MiniZinc error";
    std::string prompt = render_prompt(tmpl, kModel, feedback);

    CHECK(contains(prompt, feedback));
    std::size_t rules = prompt.find(kSemicolonRule);
    std::size_t fb = prompt.find(feedback);
    std::size_t model_text = prompt.find(kModel.source_text);
    REQUIRE(rules != std::string::npos);
    REQUIRE(fb != std::string::npos);
    REQUIRE(model_text != std::string::npos);
    CHECK(rules < fb);
    CHECK(fb < model_text);

    // The no-feedback prompt differs only by the feedback block.
    std::string without = render_prompt(tmpl, kModel, std::nullopt);
    CHECK(without.find(feedback) == std::string::npos);
    CHECK(prompt.size() > without.size());
    CHECK(prompt.substr(0, rules) == without.substr(0, rules));
}

TEST_CASE("p2 drops the feedback-loop steps but keeps the rest") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P2);
    std::string prompt = render_prompt(tmpl, kModel, std::nullopt);
    CHECK(contains(prompt, kObjectiveSentence));
    CHECK(contains(prompt, kFamiliesSentence));
    CHECK_FALSE(contains(prompt, kFeedbackStep));
    CHECK_FALSE(contains(prompt, kRepeatStep));
    CHECK(contains(prompt, kStructure));
    CHECK(contains(prompt, kSemicolonRule));
    CHECK(contains(prompt, kModel.source_text));
}

TEST_CASE("p3 is a minimal request with the output format") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P3);
    std::string prompt = render_prompt(tmpl, kModel, std::nullopt);
    CHECK(contains(prompt, "five additional streamlining constraints"));
    CHECK(contains(prompt, kStructure));
    CHECK(contains(prompt, kModel.source_text));
    CHECK_FALSE(contains(prompt, "Compliance Rules"));
    CHECK_FALSE(contains(prompt, "1. Analyze Content"));
    auto p1 = render_prompt(PromptTemplate::for_variant(PromptVariant::P1), kModel, std::nullopt);
    CHECK(prompt.size() < p1.size() / 2);
}

TEST_CASE("p4 does not name the constraint families") {
    auto tmpl = PromptTemplate::for_variant(PromptVariant::P4);
    std::string prompt = render_prompt(tmpl, kModel, std::nullopt);
    CHECK(contains(prompt, kObjectiveSentence));
    CHECK_FALSE(contains(prompt, "symmetry-breaking"));
    CHECK_FALSE(contains(prompt, "dominance-breaking"));
    CHECK_FALSE(contains(prompt, "implied"));
    CHECK(contains(prompt, kFeedbackStep));
    CHECK(contains(prompt, kSemicolonRule));
    CHECK(contains(prompt, kModel.source_text));
}
