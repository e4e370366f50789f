#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streamllm/model.hpp"
#include "streamllm/run_log.hpp"
#include "streamllm/solver.hpp"

namespace streamllm {

// Minimum relative time reduction that counts as a real improvement rather
// than solver runtime noise. Ships as the default; calibrate_threshold
// measures a machine-specific value.
constexpr double kDefaultSignificanceThreshold = 6.38;

// Percent of the original solving time saved: 100 * (t_orig - t_stream) / t_orig.
// Negative for slowdowns. Requires t_orig > 0.
double time_reduction(double t_orig, double t_stream);

// Strictly above the threshold, compared on unrounded values.
bool is_significant(double t_orig, double t_stream,
                    double threshold_percent = kDefaultSignificanceThreshold);

// Like time_reduction but charging the streamliner generation time to the
// streamlined run: 100 * (t_orig - (t_generation + t_stream)) / t_orig.
double net_saving(double t_orig, double t_stream, double t_generation);

struct CalibrationResult {
    double threshold_percent = 0.0;  // mean of per-instance reductions
    std::vector<std::pair<std::string, double>> per_instance;  // id -> percent
    std::vector<std::string> skipped;                          // unsat/error copies
};

// Runs `copies` identical unstreamlined solves per instance and measures the
// reduction between the first copy and the quickest of the rest; the mean
// across instances estimates the noise floor of the solver.
CalibrationResult calibrate_threshold(SolverInterface& solver, const ConstraintModel& model,
                                      const std::vector<DataInstance>& instances, int copies,
                                      double limit_seconds, int max_parallel,
                                      RunLogger* logger = nullptr);

// One raced instance as the reporter sees it.
struct ReportRecord {
    std::string problem;
    std::string configuration;  // mode x provider (x prompt variant)
    std::string run_label;
    std::string instance_id;
    double t_orig = 0.0;
    double t_stream = 0.0;
    double t_generation = 0.0;
};

struct ConfigAggregate {
    std::string problem;
    std::string configuration;
    int n_records = 0;
    double mean_reduction_percent = 0.0;
    double pct_significant = 0.0;
    double mean_net_saving_percent = 0.0;
    std::map<int, int> histogram;  // 20-minute bucket index of t_orig -> count
    std::optional<double> run_delta_percent;  // set when exactly two runs exist
};

struct RunReport {
    double threshold_percent = kDefaultSignificanceThreshold;
    std::vector<ReportRecord> records;
    std::vector<ConfigAggregate> aggregates;  // (problem, configuration) order
};

// Histogram bucket for an original solving time, per 20-minute interval.
int runtime_bucket(double t_orig_seconds);

RunReport aggregate(const std::vector<ReportRecord>& records, double threshold_percent);

// Plain-text summary: one row per problem, one column per configuration,
// cells showing percent significantly improved and mean reduction.
std::string render_report_table(const RunReport& report);

}  // namespace streamllm
