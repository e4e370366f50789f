#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "streamllm/clock.hpp"
#include "streamllm/evaluator.hpp"
#include "streamllm/generator.hpp"
#include "streamllm/model.hpp"
#include "streamllm/racer.hpp"
#include "streamllm/reporter.hpp"
#include "streamllm/run_log.hpp"
#include "streamllm/selector.hpp"

namespace streamllm {

// Reads every *.dzn file (sorted by name) as one instance; the id is the
// filename stem.
std::vector<DataInstance> load_instances_from_dir(const std::string& dir, InstanceRole role);

// On-disk layout of one pipeline run. Append-only while a run is going; a
// completed directory plus the recorded responses replays the run
// byte-for-byte with the fixture provider and the same seed.
//
//   config.json       effective configuration echo
//   model.mzn         model copy
//   instances/        graded training data files
//   manifest.json     kept/excluded instances with baselines and reasons
//   run.log           timestamped line-delimited event records
//   responses/        every LLM response, numbered, replayable as a fixture
//   eval_matrix.jsonl header line, then one record per matrix cell
//   pool.json         accepted and discarded candidates with provenance
//   portfolio.json    selected constraints in the keyed interchange format
//   portfolio_meta.json  members, score, selection trail, generation time
//   races.jsonl       per-lane records plus one summary per raced instance
//   report.json/.txt  metrics
class RunDirectory {
public:
    static RunDirectory create(const std::string& path);
    static RunDirectory open(const std::string& path);

    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const;
    bool has(const std::string& name) const;

    void save_config(const std::map<std::string, std::string>& effective);
    std::map<std::string, std::string> load_config() const;

    void save_model(const ConstraintModel& model);
    ConstraintModel load_model() const;

    void save_manifest(const GradedTrainingSet& graded);
    GradedTrainingSet load_manifest() const;

    void save_matrix(const EvalMatrix& matrix);
    EvalMatrix load_matrix() const;

    void save_pool(const CandidatePool& pool);
    CandidatePool load_pool() const;

    void save_portfolio(const Portfolio& portfolio, const std::vector<Streamliner>& members,
                        double generation_seconds);
    // Members in portfolio order; generation seconds into *generation_seconds
    // when given. Falls back to the keyed file alone if the meta is missing.
    std::vector<Streamliner> load_portfolio(double* generation_seconds = nullptr) const;

    void append_race(const RaceResult& result);
    std::vector<RaceResult> load_races() const;

    void save_report(const RunReport& report);

    // Logger appending timestamped records to run.log.
    std::unique_ptr<RunLogger> make_logger(Clock& clock) const;

    std::string responses_dir() const { return file("responses"); }

private:
    explicit RunDirectory(std::string path) : path_(std::move(path)) {}
    std::string path_;
};

}  // namespace streamllm
