#pragma once

#include <string>
#include <vector>

#include "streamllm/evaluator.hpp"

namespace streamllm {

// The selected set of streamliners plus its virtual-best training score.
struct Portfolio {
    std::vector<std::string> members;  // k ids, fewer only when the pool is smaller
    double score_seconds = 0.0;
    std::string selection_meta;  // strategy and tie-break trail
};

// Subsets with more members than this many combinations fall back to greedy
// forward selection; exhaustive search stays well under a second below it.
constexpr long long kExhaustiveSubsetLimit = 200000;

// Virtual-best total: per instance the best SAT time any member achieves,
// capped at the instance baseline; unsolved instances are charged t_base.
// The empty subset scores the full baseline total.
double portfolio_score(const EvalMatrix& matrix, const std::vector<std::string>& subset);

// Minimizes portfolio_score over k-subsets of the surviving candidates,
// exhaustively when C(pool, k) fits the limit, greedily otherwise. Ties are
// broken by fewer total UNSAT cells among members, then by id order.
// Raises SelectionError when candidate_ids is empty.
Portfolio select_k_best(const EvalMatrix& matrix, const std::vector<std::string>& candidate_ids,
                        int k);

}  // namespace streamllm
