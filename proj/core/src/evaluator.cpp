#include "streamllm/evaluator.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

// Runs fn(0..count-1) with at most max_parallel tasks in flight. The first
// exception aborts the remaining unstarted tasks and is rethrown.
void parallel_for(int count, int max_parallel, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (max_parallel <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> abort{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count || abort.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                abort.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    int n_threads = std::min(max_parallel, count);
    threads.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Deterministic choice of n distinct indices out of 0..total-1, preserving
// ascending order. Hand-rolled so the selection is identical across
// standard library implementations.
std::vector<std::size_t> sample_indices(std::size_t total, std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> indices(total);
    std::iota(indices.begin(), indices.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng() % (total - i));
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());
    return indices;
}

}  // namespace

EvalMatrix::EvalMatrix(std::vector<std::string> instance_ids,
                       std::map<std::string, double> baselines)
    : instance_ids_(std::move(instance_ids)), baselines_(std::move(baselines)) {}

void EvalMatrix::add_row(const std::string& streamliner_id, std::vector<SolveOutcome> cells) {
    if (cells.size() != instance_ids_.size()) {
        throw std::invalid_argument("row size does not match column count");
    }
    if (rows_.emplace(streamliner_id, std::move(cells)).second) {
        row_order_.push_back(streamliner_id);
    }
}

double EvalMatrix::total_baseline() const {
    double total = 0.0;
    for (const auto& id : instance_ids_) total += baselines_.at(id);
    return total;
}

int EvalMatrix::unsat_cells(const std::string& row_id) const {
    const auto& cells = rows_.at(row_id);
    return static_cast<int>(
        std::count_if(cells.begin(), cells.end(),
                      [](const SolveOutcome& o) { return o.status == SolveStatus::Unsat; }));
}

std::vector<CellRecord> EvalMatrix::to_records() const {
    std::vector<CellRecord> records;
    records.reserve(row_order_.size() * instance_ids_.size());
    for (const auto& row_id : row_order_) {
        const auto& cells = rows_.at(row_id);
        for (std::size_t c = 0; c < instance_ids_.size(); ++c) {
            records.push_back({row_id, instance_ids_[c], cells[c]});
        }
    }
    return records;
}

EvalMatrix EvalMatrix::from_records(const std::vector<std::string>& instance_ids,
                                    const std::map<std::string, double>& baselines,
                                    const std::vector<CellRecord>& records) {
    EvalMatrix m(instance_ids, baselines);
    std::map<std::string, std::size_t> col_of;
    for (std::size_t c = 0; c < instance_ids.size(); ++c) col_of[instance_ids[c]] = c;

    std::vector<std::string> row_order;
    std::map<std::string, std::vector<SolveOutcome>> rows;
    for (const auto& r : records) {
        auto it = rows.find(r.streamliner_id);
        if (it == rows.end()) {
            row_order.push_back(r.streamliner_id);
            it = rows.emplace(r.streamliner_id, std::vector<SolveOutcome>(instance_ids.size()))
                     .first;
        }
        it->second.at(col_of.at(r.instance_id)) = r.outcome;
    }
    for (const auto& id : row_order) m.add_row(id, rows.at(id));
    return m;
}

GradedTrainingSet grade_baselines(SolverInterface& solver, const ConstraintModel& model,
                                  const std::vector<DataInstance>& instances,
                                  const GenerationConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    GradedTrainingSet result;
    result.seed = seed;

    std::vector<SolveOutcome> outcomes(instances.size());
    const int parallel = solver.is_simulated() ? 1 : cfg.max_parallel_solves;
    parallel_for(static_cast<int>(instances.size()), parallel, [&](int i) {
        outcomes[static_cast<std::size_t>(i)] =
            solver.solve(model, instances[static_cast<std::size_t>(i)], cfg.t_train_cap);
    });

    std::vector<DataInstance> usable;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& outcome = outcomes[i];
        const auto& inst = instances[i];
        switch (outcome.status) {
            case SolveStatus::Sat:
                if (outcome.wall_seconds < cfg.t_train_floor) {
                    result.excluded.push_back(
                        {inst.id, "baseline below training floor", outcome.wall_seconds});
                } else if (outcome.wall_seconds > cfg.t_train_cap) {
                    result.excluded.push_back(
                        {inst.id, "baseline above training cap", outcome.wall_seconds});
                } else {
                    DataInstance graded = inst;
                    graded.baseline_seconds = outcome.wall_seconds;
                    usable.push_back(std::move(graded));
                }
                break;
            case SolveStatus::Timeout:
                result.excluded.push_back(
                    {inst.id, "too hard for training (hit cap)", outcome.wall_seconds});
                break;
            case SolveStatus::Unsat:
                result.excluded.push_back({inst.id, "unsatisfiable", outcome.wall_seconds});
                break;
            case SolveStatus::Error:
                result.excluded.push_back(
                    {inst.id, "solver error: " + outcome.detail, outcome.wall_seconds});
                break;
        }
    }

    if (usable.size() < 3) {
        throw GradingError("only " + std::to_string(usable.size()) +
                           " usable training instances (need at least 3)");
    }

    if (usable.size() > static_cast<std::size_t>(cfg.n_train)) {
        auto picked =
            sample_indices(usable.size(), static_cast<std::size_t>(cfg.n_train), seed);
        std::vector<bool> keep(usable.size(), false);
        for (auto i : picked) keep[i] = true;
        for (std::size_t i = 0; i < usable.size(); ++i) {
            if (keep[i]) {
                result.kept.push_back(std::move(usable[i]));
            } else {
                result.excluded.push_back({usable[i].id, "subsampled out (over n_train quota)",
                                           *usable[i].baseline_seconds});
            }
        }
        result.subsampled = true;
    } else {
        result.kept = std::move(usable);
    }
    return result;
}

void evaluate_candidates(SolverInterface& solver, const ConstraintModel& model,
                         const std::vector<Streamliner>& candidates,
                         const GradedTrainingSet& training, const GenerationConfig& cfg,
                         EvalMatrix& matrix) {
    if (candidates.empty()) return;
    const auto& kept = training.kept;
    const int n_rows = static_cast<int>(candidates.size());
    const int n_cols = static_cast<int>(kept.size());

    std::vector<ConstraintModel> composed;
    composed.reserve(candidates.size());
    for (const auto& c : candidates) composed.push_back(compose_streamlined_model(model, c));

    std::vector<std::vector<SolveOutcome>> cells(
        static_cast<std::size_t>(n_rows),
        std::vector<SolveOutcome>(static_cast<std::size_t>(n_cols)));
    std::vector<std::unique_ptr<std::atomic<bool>>> row_errored;
    for (int r = 0; r < n_rows; ++r) {
        row_errored.push_back(std::make_unique<std::atomic<bool>>(false));
    }

    const int parallel = solver.is_simulated() ? 1 : cfg.max_parallel_solves;
    parallel_for(n_rows * n_cols, parallel, [&](int task) {
        const int r = task / n_cols;
        const int c = task % n_cols;
        const auto& inst = kept[static_cast<std::size_t>(c)];
        if (row_errored[static_cast<std::size_t>(r)]->load()) {
            cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = SolveOutcome{
                SolveStatus::Error, 0.0, "error propagated within row"};
            return;
        }
        SolveOutcome outcome = solver.solve(composed[static_cast<std::size_t>(r)], inst,
                                            *inst.baseline_seconds);
        if (outcome.status == SolveStatus::Error) {
            row_errored[static_cast<std::size_t>(r)]->store(true);
        }
        cells[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = outcome;
    });

    for (int r = 0; r < n_rows; ++r) {
        matrix.add_row(candidates[static_cast<std::size_t>(r)].id,
                       std::move(cells[static_cast<std::size_t>(r)]));
    }
}

std::vector<std::string> apply_discard_rule(const EvalMatrix& matrix,
                                            const std::vector<std::string>& candidate_ids) {
    std::vector<std::string> survivors;
    for (const auto& id : candidate_ids) {
        const auto& cells = matrix.row(id);
        bool any_error = false;
        bool all_timeout = !cells.empty();
        for (const auto& cell : cells) {
            if (cell.status == SolveStatus::Error) any_error = true;
            if (cell.status != SolveStatus::Timeout) all_timeout = false;
        }
        if (!any_error && !all_timeout) survivors.push_back(id);
    }
    return survivors;
}

}  // namespace streamllm
