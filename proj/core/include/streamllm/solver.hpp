#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "streamllm/clock.hpp"
#include "streamllm/model.hpp"
#include "streamllm/subprocess.hpp"

namespace streamllm {

struct SolverConfig {
    std::string executable = "minizinc";
    std::string backend = "chuffed";
    std::vector<std::string> extra_args;
};

// Wall seconds a solve may exceed its limit by before the harness-side
// hard kill fires; process teardown can push the measured time past the
// limit by up to this much.
constexpr double kTimeoutSlackSeconds = 2.0;

// Stable fingerprint of a model's normalized source text (per-line trailing
// whitespace and trailing blank lines ignored). Keys the fake solver script.
std::string model_fingerprint(const ConstraintModel& model);

class SolverInterface {
public:
    virtual ~SolverInterface() = default;

    // Solves model on instance under limit_seconds. SAT/UNSAT come from the
    // MiniZinc output sentinels; the harness measures wall time itself.
    // Throws EnvironmentError on misconfiguration (never an ERROR outcome).
    virtual SolveOutcome solve(const ConstraintModel& model,
                               const DataInstance& instance,
                               double limit_seconds,
                               const CancelToken* cancel = nullptr) = 0;

    // True when solves are table lookups under virtual time. The racer
    // simulates lane concurrency instead of spawning threads, and the
    // evaluator runs cells serially so virtual time stays well-defined.
    virtual bool is_simulated() const { return false; }

    // Outcome this solver would produce, without running anything or
    // advancing time. Simulated solvers must implement it; the race
    // simulator depends on it.
    virtual std::optional<SolveOutcome> peek_outcome(const ConstraintModel& /*model*/,
                                                     const DataInstance& /*instance*/,
                                                     double /*limit_seconds*/) const {
        return std::nullopt;
    }
};

// Runs `<executable> --solver <backend> --time-limit <ms> <model> <data>`
// with model/data materialized to a per-run temp directory. The MiniZinc
// millisecond limit and a harness-side hard kill at limit + slack are both
// armed; the harness kill is authoritative.
class MiniZincSolver final : public SolverInterface {
public:
    explicit MiniZincSolver(SolverConfig config);
    ~MiniZincSolver() override;

    SolveOutcome solve(const ConstraintModel& model,
                       const DataInstance& instance,
                       double limit_seconds,
                       const CancelToken* cancel = nullptr) override;

    const std::string& temp_dir() const { return temp_dir_; }

private:
    SolverConfig config_;
    std::string temp_dir_;
    std::mutex file_counter_mutex_;
    int file_counter_ = 0;
};

// Scripted outcomes for deterministic tests. A key may carry a sequence of
// outcomes consumed call by call (the last entry repeats), which is how
// run-to-run solver variance is scripted for threshold calibration.
// Not thread-safe on its own; FakeSolver serializes access.
class FakeSolverScript {
public:
    struct Entry {
        std::vector<SolveOutcome> outcomes;  // consumed in order, last repeats
    };

    FakeSolverScript() = default;
    explicit FakeSolverScript(SolveOutcome default_outcome)
        : default_outcome_(std::move(default_outcome)) {}

    // Exact match on (model fingerprint, instance id).
    void script(const std::string& fingerprint, const std::string& instance_id,
                SolveOutcome outcome);
    void script_sequence(const std::string& fingerprint, const std::string& instance_id,
                         std::vector<SolveOutcome> outcomes);
    // Convenience matchers so scripts can be written without computing
    // fingerprints: model name, or a substring of the model source (useful
    // for composed models, matched in insertion order).
    void script_name(const std::string& model_name, const std::string& instance_id,
                     SolveOutcome outcome);
    void script_contains(const std::string& source_substring, const std::string& instance_id,
                         SolveOutcome outcome);

    void set_default(SolveOutcome outcome) { default_outcome_ = std::move(outcome); }
    const SolveOutcome& default_outcome() const { return default_outcome_; }

    // Next scripted outcome for this solve, advancing the per-key cursor.
    SolveOutcome next(const ConstraintModel& model, const std::string& instance_id);
    // Same lookup without advancing any cursor or consuming sequence slots.
    SolveOutcome peek(const ConstraintModel& model, const std::string& instance_id) const;

    // Loads the JSON script format documented in the README.
    static FakeSolverScript load_file(const std::string& path);

private:
    struct SeqEntry {
        Entry entry;
        std::size_t cursor = 0;
    };
    const Entry* find(const ConstraintModel& model, const std::string& instance_id,
                      std::string* key_out) const;

    std::map<std::string, SeqEntry> by_key_;  // "fp:<fp>|<inst>" and "name:<name>|<inst>"
    std::vector<std::pair<std::string, std::string>> contains_matchers_;  // (substring, key)
    std::map<std::string, SeqEntry> aux_entries_;  // entries owned by contains matchers
    SolveOutcome default_outcome_{SolveStatus::Error, 0.0, "unscripted"};
};

// Table-driven solver that advances a shared virtual clock by each solve's
// wall time instead of sleeping.
class FakeSolver final : public SolverInterface {
public:
    FakeSolver(FakeSolverScript script, std::shared_ptr<VirtualClock> clock)
        : script_(std::move(script)), clock_(std::move(clock)) {}

    SolveOutcome solve(const ConstraintModel& model,
                       const DataInstance& instance,
                       double limit_seconds,
                       const CancelToken* cancel = nullptr) override;

    bool is_simulated() const override { return true; }

    std::optional<SolveOutcome> peek_outcome(const ConstraintModel& model,
                                             const DataInstance& instance,
                                             double limit_seconds) const override {
        return peek(model, instance, limit_seconds);
    }

    // Scripted outcome capped at the limit, without advancing the clock.
    SolveOutcome peek(const ConstraintModel& model, const DataInstance& instance,
                      double limit_seconds) const;

    // Every (model name, instance id, limit) this solver was asked to run.
    struct CallRecord {
        std::string model_name;
        std::string instance_id;
        double limit_seconds;
    };
    std::vector<CallRecord> call_log() const;

    VirtualClock& clock() { return *clock_; }

private:
    static SolveOutcome cap_to_limit(SolveOutcome scripted, double limit_seconds);

    FakeSolverScript script_;
    std::shared_ptr<VirtualClock> clock_;
    mutable std::mutex mutex_;
    std::vector<CallRecord> calls_;
};

}  // namespace streamllm
