#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "streamllm/selector.hpp"

using namespace streamllm;

namespace {

EvalMatrix build_matrix(int n_rows, int n_cols, std::uint64_t seed,
                        std::vector<std::string>& ids) {
    std::mt19937_64 rng(seed);
    std::vector<std::string> instance_ids;
    std::map<std::string, double> baselines;
    for (int c = 0; c < n_cols; ++c) {
        instance_ids.push_back("i" + std::to_string(c));
        baselines[instance_ids.back()] = 10.0;
    }
    EvalMatrix matrix(instance_ids, baselines);
    for (int r = 0; r < n_rows; ++r) {
        std::string id = "s" + std::to_string(1000 + r);
        ids.push_back(id);
        std::vector<SolveOutcome> cells;
        for (int c = 0; c < n_cols; ++c) {
            if (rng() % 3 == 0) {
                cells.push_back({SolveStatus::Timeout, 10.0, ""});
            } else {
                cells.push_back({SolveStatus::Sat, 0.5 + static_cast<double>(rng() % 19) * 0.5, ""});
            }
        }
        matrix.add_row(id, cells);
    }
    return matrix;
}

}  // namespace

static void BM_PortfolioScore(benchmark::State& state) {
    std::vector<std::string> ids;
    EvalMatrix matrix = build_matrix(32, 15, 1, ids);
    std::vector<std::string> subset{ids[0], ids[7], ids[19]};
    for (auto _ : state) {
        benchmark::DoNotOptimize(portfolio_score(matrix, subset));
    }
}
BENCHMARK(BM_PortfolioScore);

// Exhaustive k=3 selection across realtime pool sizes; the largest case sits
// just under the greedy-fallback threshold.
static void BM_SelectKBest(benchmark::State& state) {
    const int pool = static_cast<int>(state.range(0));
    std::vector<std::string> ids;
    EvalMatrix matrix = build_matrix(pool, 15, 2, ids);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_k_best(matrix, ids, 3));
    }
    state.SetComplexityN(pool);
}
BENCHMARK(BM_SelectKBest)->Arg(12)->Arg(25)->Arg(50)->Arg(75)->Arg(100)->Complexity();

static void BM_SelectKBestGreedy(benchmark::State& state) {
    std::vector<std::string> ids;
    EvalMatrix matrix = build_matrix(150, 15, 3, ids);  // past the exhaustive limit
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_k_best(matrix, ids, 3));
    }
}
BENCHMARK(BM_SelectKBestGreedy);

BENCHMARK_MAIN();
