#include "streamllm/selector.hpp"

#include <algorithm>
#include <limits>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

// C(n, k) capped at kExhaustiveSubsetLimit + 1 to stay overflow-safe.
long long capped_combinations(int n, int k) {
    if (k > n) return 0;
    long long result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > kExhaustiveSubsetLimit) return kExhaustiveSubsetLimit + 1;
    }
    return result;
}

int total_unsat(const EvalMatrix& matrix, const std::vector<std::string>& subset) {
    int n = 0;
    for (const auto& id : subset) n += matrix.unsat_cells(id);
    return n;
}

// True when (score_a, unsat_a, ids_a) beats (score_b, unsat_b, ids_b).
bool better(double score_a, int unsat_a, const std::vector<std::string>& ids_a, double score_b,
            int unsat_b, const std::vector<std::string>& ids_b) {
    if (score_a != score_b) return score_a < score_b;
    if (unsat_a != unsat_b) return unsat_a < unsat_b;
    return ids_a < ids_b;
}

}  // namespace

double portfolio_score(const EvalMatrix& matrix, const std::vector<std::string>& subset) {
    double total = 0.0;
    const auto& cols = matrix.instance_ids();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        double best = matrix.baseline(cols[c]);
        for (const auto& id : subset) {
            const auto& cell = matrix.row(id)[c];
            if (cell.status == SolveStatus::Sat && cell.wall_seconds < best) {
                best = cell.wall_seconds;
            }
        }
        total += best;
    }
    return total;
}

Portfolio select_k_best(const EvalMatrix& matrix, const std::vector<std::string>& candidate_ids,
                        int k) {
    if (candidate_ids.empty()) {
        throw SelectionError("no surviving streamliners to select from");
    }
    const int n = static_cast<int>(candidate_ids.size());

    Portfolio result;
    if (n <= k) {
        result.members = candidate_ids;
        std::sort(result.members.begin(), result.members.end());
        result.score_seconds = portfolio_score(matrix, result.members);
        result.selection_meta = "forced: pool size " + std::to_string(n) + " <= k";
        return result;
    }

    // Sorted id universe makes every emitted subset lexicographically ordered,
    // which is what the tie-break compares.
    std::vector<std::string> universe = candidate_ids;
    std::sort(universe.begin(), universe.end());

    const long long n_subsets = capped_combinations(n, k);
    if (n_subsets <= kExhaustiveSubsetLimit) {
        std::vector<int> pick(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;

        double best_score = std::numeric_limits<double>::infinity();
        int best_unsat = 0;
        std::vector<std::string> best_ids;
        bool tie_seen = false;

        std::vector<std::string> subset(static_cast<std::size_t>(k));
        for (;;) {
            for (int i = 0; i < k; ++i) {
                subset[static_cast<std::size_t>(i)] =
                    universe[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])];
            }
            const double score = portfolio_score(matrix, subset);
            const int unsat = total_unsat(matrix, subset);
            if (best_ids.empty() || better(score, unsat, subset, best_score, best_unsat, best_ids)) {
                if (!best_ids.empty() && score == best_score) tie_seen = true;
                best_score = score;
                best_unsat = unsat;
                best_ids = subset;
            } else if (score == best_score) {
                tie_seen = true;
            }

            // Next combination in lexicographic index order.
            int i = k - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == i + n - k) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j) {
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
        result.members = best_ids;
        result.score_seconds = best_score;
        result.selection_meta = "exhaustive over " + std::to_string(n_subsets) + " subsets";
        if (tie_seen) result.selection_meta += "; tie-break applied";
        return result;
    }

    // Greedy forward selection: best single, then best addition, k times.
    std::vector<std::string> chosen;
    std::vector<std::string> remaining = universe;
    for (int round = 0; round < k && !remaining.empty(); ++round) {
        double best_score = std::numeric_limits<double>::infinity();
        int best_unsat = 0;
        std::vector<std::string> best_set;
        std::size_t best_index = 0;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            std::vector<std::string> trial = chosen;
            trial.push_back(remaining[i]);
            std::sort(trial.begin(), trial.end());
            const double score = portfolio_score(matrix, trial);
            const int unsat = total_unsat(matrix, trial);
            if (best_set.empty() ||
                better(score, unsat, trial, best_score, best_unsat, best_set)) {
                best_score = score;
                best_unsat = unsat;
                best_set = trial;
                best_index = i;
            }
        }
        chosen = best_set;
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_index));
        result.score_seconds = best_score;
    }
    result.members = chosen;
    result.selection_meta =
        "greedy: C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds " +
        std::to_string(kExhaustiveSubsetLimit) + " subsets";
    return result;
}

}  // namespace streamllm
