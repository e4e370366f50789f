#pragma once

#include <string>
#include <vector>

namespace streamllm::testing {

// Crafted LLM responses with their expected extraction outcomes. Shared by
// the unit tests and the acceptance suite.
struct ExtractionCase {
    std::string name;
    std::string response;
    bool expect_error = false;
    std::vector<std::string> expected_texts;  // normalized, in slot order
};

inline const std::vector<ExtractionCase>& extraction_corpus() {
    static const std::vector<ExtractionCase> kCases = {
        {"plain_object",
         R"({"streamliner_1": "constraint a;", "streamliner_2": "constraint b;",)"
         R"( "streamliner_3": "constraint c;", "streamliner_4": "constraint d;",)"
         R"( "streamliner_5": "constraint e;"})",
         false,
         {"constraint a;", "constraint b;", "constraint c;", "constraint d;",
          "constraint e;"}},
        {"json_fence",
         "```json\n{\"streamliner_1\": \"constraint a;\", \"streamliner_2\": \"constraint "
         "b;\", \"streamliner_3\": \"constraint c;\", \"streamliner_4\": \"constraint d;\", "
         "\"streamliner_5\": \"constraint e;\"}\n```",
         false,
         {"constraint a;", "constraint b;", "constraint c;", "constraint d;",
          "constraint e;"}},
        {"bare_fence",
         "```\n{\"streamliner_1\": \"constraint x[1] = 1;\"}\n```",
         false,
         {"constraint x[1] = 1;"}},
        {"prose_wrapped",
         "Here are my five constraints for this model:\n\n{\"streamliner_1\": \"constraint "
         "a;\", \"streamliner_2\": \"constraint b;\"}\n\nI hope these help narrow the search.",
         false,
         {"constraint a;", "constraint b;"}},
        {"missing_semicolon_one",
         R"({"streamliner_1": "constraint a;", "streamliner_2": "constraint b",)"
         R"( "streamliner_3": "constraint c;"})",
         false,
         {"constraint a;", "constraint b;", "constraint c;"}},
        {"missing_semicolon_all",
         R"({"streamliner_1": "constraint a", "streamliner_2": "constraint b",)"
         R"( "streamliner_3": "constraint c", "streamliner_4": "constraint d",)"
         R"( "streamliner_5": "constraint e"})",
         false,
         {"constraint a;", "constraint b;", "constraint c;", "constraint d;",
          "constraint e;"}},
        {"missing_key",
         R"({"streamliner_1": "constraint a;", "streamliner_2": "constraint b;",)"
         R"( "streamliner_4": "constraint d;", "streamliner_5": "constraint e;"})",
         false,
         {"constraint a;", "constraint b;", "constraint d;", "constraint e;"}},
        {"no_braces", "Here are my ideas: add ordering constraints and fix the first slot.",
         true,
         {}},
        {"unterminated_brace", "{ \"streamliner_1\": \"constraint a;\"", true, {}},
        {"garbage_then_object",
         "{ not json at all }\n{\"streamliner_1\": \"constraint a;\"}",
         false,
         {"constraint a;"}},
        {"non_constraint_value_dropped",
         R"({"streamliner_1": "constraint a;", "streamliner_2": "var int: y;",)"
         R"( "streamliner_3": "constraint c;"})",
         false,
         {"constraint a;", "constraint c;"}},
        {"non_string_value_dropped",
         R"({"streamliner_1": "constraint a;", "streamliner_2": 42,)"
         R"( "streamliner_3": "constraint c;"})",
         false,
         {"constraint a;", "constraint c;"}},
        {"extra_keys_ignored",
         R"({"explanation": "these cut symmetry", "streamliner_1": "constraint a;",)"
         R"( "notes": "check bounds"})",
         false,
         {"constraint a;"}},
        {"keys_out_of_order",
         R"({"streamliner_3": "constraint c;", "streamliner_1": "constraint a;",)"
         R"( "streamliner_2": "constraint b;"})",
         false,
         {"constraint a;", "constraint b;", "constraint c;"}},
        {"numeric_key_order",
         R"({"streamliner_10": "constraint j;", "streamliner_2": "constraint b;"})",
         false,
         {"constraint b;", "constraint j;"}},
        {"nested_braces_in_value",
         R"({"streamliner_1": "constraint card({ v | v in S }) > 0;"})",
         false,
         {"constraint card({ v | v in S }) > 0;"}},
        {"escaped_quotes_in_value",
         R"({"streamliner_1": "constraint trace(\"msg\", x > 0);"})",
         false,
         {"constraint trace(\"msg\", x > 0);"}},
        {"empty_object", "{}", false, {}},
        {"whitespace_collapsed",
         "{\"streamliner_1\": \"constraint   forall(i in 1..n)\\n   (x[i] >= 0);\"}",
         false,
         {"constraint forall(i in 1..n) (x[i] >= 0);"}},
        {"first_object_wins",
         R"(metadata: {"model": "toy"} and then {"streamliner_1": "constraint a;"})",
         false,
         {}},
        {"crlf_response",
         "```json\r\n{\"streamliner_1\": \"constraint a;\"}\r\n```\r\n",
         false,
         {"constraint a;"}},
        {"prose_mentions_braces_in_string",
         R"(The object is {"streamliner_1": "constraint sum(x) = { literal } fix;"} done.)",
         false,
         {"constraint sum(x) = { literal } fix;"}},
        {"single_key", R"({"streamliner_1": "constraint x > 0;"})", false,
         {"constraint x > 0;"}},
        {"already_normalized_forall",
         R"({"streamliner_1": "constraint forall(i in 1..n)(c[i] <= c[i+1]);"})",
         false,
         {"constraint forall(i in 1..n)(c[i] <= c[i+1]);"}},
    };
    return kCases;
}

}  // namespace streamllm::testing
