#include "streamllm/reporter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

double time_reduction(double t_orig, double t_stream) {
    if (t_orig <= 0.0) throw std::domain_error("time_reduction requires t_orig > 0");
    return 100.0 * (t_orig - t_stream) / t_orig;
}

bool is_significant(double t_orig, double t_stream, double threshold_percent) {
    return time_reduction(t_orig, t_stream) > threshold_percent;
}

double net_saving(double t_orig, double t_stream, double t_generation) {
    if (t_orig <= 0.0) throw std::domain_error("net_saving requires t_orig > 0");
    return 100.0 * (t_orig - (t_generation + t_stream)) / t_orig;
}

CalibrationResult calibrate_threshold(SolverInterface& solver, const ConstraintModel& model,
                                      const std::vector<DataInstance>& instances, int copies,
                                      double limit_seconds, int max_parallel,
                                      RunLogger* logger) {
    if (copies < 2) throw ConfigError("calibration needs at least 2 copies");
    (void)max_parallel;  // copies run serially; all must finish anyway

    CalibrationResult result;
    double sum = 0.0;
    for (const auto& instance : instances) {
        std::vector<SolveOutcome> runs;
        runs.reserve(static_cast<std::size_t>(copies));
        bool unusable = false;
        for (int c = 0; c < copies && !unusable; ++c) {
            SolveOutcome outcome = solver.solve(model, instance, limit_seconds);
            if (outcome.status == SolveStatus::Unsat || outcome.status == SolveStatus::Error) {
                unusable = true;
            }
            runs.push_back(std::move(outcome));
        }
        if (unusable) {
            result.skipped.push_back(instance.id);
            if (logger != nullptr) {
                logger->log("calibration_skip",
                            {{"instance", instance.id},
                             {"reason", to_string(runs.back().status)}});
            }
            continue;
        }
        double best_rest = runs[1].wall_seconds;
        for (int c = 2; c < copies; ++c) {
            best_rest = std::min(best_rest, runs[static_cast<std::size_t>(c)].wall_seconds);
        }
        const double first = runs[0].wall_seconds;
        const double percent = first > 0.0 ? 100.0 * (first - best_rest) / first : 0.0;
        result.per_instance.emplace_back(instance.id, percent);
        sum += percent;
        if (logger != nullptr) {
            logger->log("calibration_instance",
                        {{"instance", instance.id}, {"reduction_percent", fmt(percent)}});
        }
    }
    if (result.per_instance.empty()) {
        throw GradingError("no usable instances for threshold calibration");
    }
    result.threshold_percent = sum / static_cast<double>(result.per_instance.size());
    return result;
}

int runtime_bucket(double t_orig_seconds) {
    return static_cast<int>(t_orig_seconds / 1200.0);
}

RunReport aggregate(const std::vector<ReportRecord>& records, double threshold_percent) {
    RunReport report;
    report.threshold_percent = threshold_percent;
    report.records = records;

    // Group keys in first-appearance order to keep output stable.
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& r : records) {
        auto key = std::make_pair(r.problem, r.configuration);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }

    for (const auto& [problem, configuration] : keys) {
        ConfigAggregate agg;
        agg.problem = problem;
        agg.configuration = configuration;

        std::map<std::string, std::pair<double, int>> per_run;  // label -> (sum, n)
        double sum_reduction = 0.0, sum_net = 0.0;
        int n_significant = 0;
        for (const auto& r : records) {
            if (r.problem != problem || r.configuration != configuration) continue;
            ++agg.n_records;
            const double reduction = time_reduction(r.t_orig, r.t_stream);
            sum_reduction += reduction;
            sum_net += net_saving(r.t_orig, r.t_stream, r.t_generation);
            if (reduction > threshold_percent) ++n_significant;
            ++agg.histogram[runtime_bucket(r.t_orig)];
            auto& bucket = per_run[r.run_label];
            bucket.first += reduction;
            ++bucket.second;
        }
        agg.mean_reduction_percent = sum_reduction / agg.n_records;
        agg.mean_net_saving_percent = sum_net / agg.n_records;
        agg.pct_significant = 100.0 * n_significant / agg.n_records;
        if (per_run.size() == 2) {
            auto it = per_run.begin();
            const double mean_a = it->second.first / it->second.second;
            ++it;
            const double mean_b = it->second.first / it->second.second;
            agg.run_delta_percent = std::fabs(mean_a - mean_b);
        }
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

std::string render_report_table(const RunReport& report) {
    std::vector<std::string> problems, configurations;
    for (const auto& agg : report.aggregates) {
        if (std::find(problems.begin(), problems.end(), agg.problem) == problems.end()) {
            problems.push_back(agg.problem);
        }
        if (std::find(configurations.begin(), configurations.end(), agg.configuration) ==
            configurations.end()) {
            configurations.push_back(agg.configuration);
        }
    }

    auto find_agg = [&](const std::string& problem,
                        const std::string& configuration) -> const ConfigAggregate* {
        for (const auto& agg : report.aggregates) {
            if (agg.problem == problem && agg.configuration == configuration) return &agg;
        }
        return nullptr;
    };

    std::ostringstream out;
    out << "Significantly improved instances (%), threshold "
        << fmt(report.threshold_percent) << "%\n";
    out << "mean time reduction in parentheses\n\n";

    std::size_t name_width = 8;
    for (const auto& p : problems) name_width = std::max(name_width, p.size());
    const int cell_width = 26;

    out << std::string(name_width, ' ');
    for (const auto& c : configurations) {
        std::string label = c.substr(0, static_cast<std::size_t>(cell_width - 2));
        out << "  " << label << std::string(static_cast<std::size_t>(cell_width) - 2 - label.size(), ' ');
    }
    out << "\n";

    for (const auto& p : problems) {
        out << p << std::string(name_width - p.size(), ' ');
        for (const auto& c : configurations) {
            const ConfigAggregate* agg = find_agg(p, c);
            std::string cell = agg == nullptr
                                   ? "-"
                                   : fmt(agg->pct_significant) + " (" +
                                         fmt(agg->mean_reduction_percent) + ")";
            if (agg != nullptr && agg->run_delta_percent) {
                cell += " d=" + fmt(*agg->run_delta_percent);
            }
            if (cell.size() > static_cast<std::size_t>(cell_width) - 2) {
                cell = cell.substr(0, static_cast<std::size_t>(cell_width) - 2);
            }
            out << "  " << cell
                << std::string(static_cast<std::size_t>(cell_width) - 2 - cell.size(), ' ');
        }
        out << "\n";
    }

    // Original-runtime histogram across all records, 20-minute intervals.
    std::map<int, int> histogram;
    for (const auto& r : report.records) ++histogram[runtime_bucket(r.t_orig)];
    if (!histogram.empty()) {
        out << "\nOriginal runtimes, 20-minute intervals:\n";
        for (const auto& [bucket, count] : histogram) {
            out << "  [" << bucket * 20 << "-" << (bucket + 1) * 20 << " min): " << count << "\n";
        }
    }
    return out.str();
}

}  // namespace streamllm
