#include <benchmark/benchmark.h>

#include <string>

#include "streamllm/llm_client.hpp"
#include "streamllm/obfuscator.hpp"

using namespace streamllm;

namespace {

std::string synthetic_response(int n_keys) {
    std::string text = "Some prose first.\n```json\n{";
    for (int i = 1; i <= n_keys; ++i) {
        if (i > 1) text += ", ";
        text += "\"streamliner_" + std::to_string(i) +
                "\": \"constraint forall(i in 1..n)(x[i] <= x[i+1]);\"";
    }
    text += "}\n```\nTrailing prose.";
    return text;
}

std::string synthetic_model(int n_constraints) {
    std::string src = "int: n_items;\narray[1..n_items] of var 1..n_items: slot_of;\n";
    src += "% generated body\n";
    for (int i = 0; i < n_constraints; ++i) {
        src += "constraint slot_of[" + std::to_string(i + 1) + "] != " +
               std::to_string(i % 7 + 1) + "; % pin " + std::to_string(i) + "\n";
    }
    src += "solve satisfy;\n";
    return src;
}

}  // namespace

static void BM_ExtractStreamliners(benchmark::State& state) {
    RawResponse response;
    response.text = synthetic_response(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_streamliners(response, 5));
    }
}
BENCHMARK(BM_ExtractStreamliners);

static void BM_TokenizeModel(benchmark::State& state) {
    const std::string src = synthetic_model(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(tokenize_minizinc(src));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(src.size()));
}
BENCHMARK(BM_TokenizeModel)->Arg(50)->Arg(500);

static void BM_Obfuscate(benchmark::State& state) {
    ConstraintModel model{"bench", synthetic_model(200), "inline"};
    for (auto _ : state) {
        benchmark::DoNotOptimize(obfuscate(model, 17, {}));
    }
}
BENCHMARK(BM_Obfuscate);
