#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "streamllm/model.hpp"
#include "streamllm/solver.hpp"

namespace streamllm {

// One persisted matrix cell.
struct CellRecord {
    std::string streamliner_id;
    std::string instance_id;
    SolveOutcome outcome;
};

// Per (streamliner x training instance) solve outcomes, plus the baseline
// time of every column. Rows are appended as candidate batches come in.
class EvalMatrix {
public:
    EvalMatrix() = default;
    EvalMatrix(std::vector<std::string> instance_ids, std::map<std::string, double> baselines);

    void add_row(const std::string& streamliner_id, std::vector<SolveOutcome> cells);

    const std::vector<std::string>& instance_ids() const { return instance_ids_; }
    const std::vector<std::string>& row_ids() const { return row_order_; }
    bool has_row(const std::string& id) const { return rows_.count(id) > 0; }
    const std::vector<SolveOutcome>& row(const std::string& id) const { return rows_.at(id); }
    double baseline(const std::string& instance_id) const { return baselines_.at(instance_id); }
    double total_baseline() const;
    int unsat_cells(const std::string& row_id) const;

    std::vector<CellRecord> to_records() const;
    static EvalMatrix from_records(const std::vector<std::string>& instance_ids,
                                   const std::map<std::string, double>& baselines,
                                   const std::vector<CellRecord>& records);

private:
    std::vector<std::string> instance_ids_;
    std::map<std::string, double> baselines_;
    std::vector<std::string> row_order_;
    std::map<std::string, std::vector<SolveOutcome>> rows_;
};

struct ExcludedInstance {
    std::string id;
    std::string reason;
    double seconds = 0.0;
};

struct GradedTrainingSet {
    std::vector<DataInstance> kept;  // baseline_seconds set, input order
    std::vector<ExcludedInstance> excluded;
    std::uint64_t seed = 0;
    bool subsampled = false;
};

// Solves every instance once with the unstreamlined model under the
// training cap and keeps those whose baseline lands in
// [t_train_floor, t_train_cap]. When more than n_train remain, n_train are
// picked uniformly at random with the recorded seed. Fewer than three
// usable instances raise GradingError.
GradedTrainingSet grade_baselines(SolverInterface& solver, const ConstraintModel& model,
                                  const std::vector<DataInstance>& instances,
                                  const GenerationConfig& cfg, std::uint64_t seed);

// Solves compose_streamlined_model(model, candidate) on every training
// instance with the instance's baseline as the timeout, up to
// cfg.max_parallel_solves concurrently (serially under a simulated solver),
// and appends one row per candidate. After a row's first ERROR the
// remaining unstarted cells are recorded as propagated errors without
// solving. EnvironmentError aborts the whole batch.
void evaluate_candidates(SolverInterface& solver, const ConstraintModel& model,
                         const std::vector<Streamliner>& candidates,
                         const GradedTrainingSet& training, const GenerationConfig& cfg,
                         EvalMatrix& matrix);

// A candidate is discarded iff its row has any ERROR cell or every cell
// timed out. UNSAT never causes a discard. Returns survivors in input order.
std::vector<std::string> apply_discard_rule(const EvalMatrix& matrix,
                                            const std::vector<std::string>& candidate_ids);

}  // namespace streamllm
