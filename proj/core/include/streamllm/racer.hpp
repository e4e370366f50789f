#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamllm/clock.hpp"
#include "streamllm/model.hpp"
#include "streamllm/run_log.hpp"
#include "streamllm/solver.hpp"

namespace streamllm {

inline constexpr const char* kOriginalLane = "original";

// Test instances run under this overall limit unless overridden; matches
// the upper end of the hard-instance window the pipeline targets.
constexpr double kDefaultRaceLimitSeconds = 7200.0;

enum class RaceStatus { Sat, Unsat, Exhausted, Timeout };

const char* to_string(RaceStatus s);

enum class LaneDisposition { Sat, Unsat, Timeout, Error, Cancelled };

const char* to_string(LaneDisposition d);

struct LaneRecord {
    std::string lane_id;  // "original" or a streamliner id
    LaneDisposition disposition = LaneDisposition::Cancelled;
    double seconds = 0.0;
    std::string detail;
};

struct RaceResult {
    std::string instance_id;
    std::optional<std::string> winner;  // set iff status == Sat
    RaceStatus status = RaceStatus::Exhausted;
    double winning_seconds = 0.0;  // winner lane's wall time
    std::vector<LaneRecord> lanes;
    double generation_seconds = 0.0;  // carried in for net-saving accounting
    std::optional<double> baseline_seconds;  // unstreamlined time, when known
};

// A lane to race: the original model first, then the portfolio members.
struct RaceLane {
    std::string lane_id;
    ConstraintModel model;
};

// Builds the k+1 lanes: original model plus one composed model per
// portfolio member, in portfolio order.
std::vector<RaceLane> build_race_lanes(const ConstraintModel& model,
                                       const std::vector<Streamliner>& portfolio_members);

// Pure arbitration shared by the threaded and the simulated race: feed lane
// completions in arrival order (ties already resolved by the caller) and
// read the decision. First SAT from any lane wins; UNSAT from the original
// lane ends the race as UNSAT; streamlined UNSAT/ERROR lanes just retire,
// because a streamliner is allowed to cut away all solutions.
class RaceArbiter {
public:
    explicit RaceArbiter(int lane_count) : lane_count_(lane_count) {}

    struct Decision {
        bool decided = false;
        RaceStatus status = RaceStatus::Exhausted;
        int winner_lane = -1;
        double seconds = 0.0;
    };

    // Returns the decision reached after this completion, if any.
    Decision on_completion(int lane_index, const SolveOutcome& outcome);
    // Decision once all lanes have reported without a SAT/UNSAT verdict.
    Decision final_decision() const;
    bool decided() const { return decision_.decided; }
    const Decision& decision() const { return decision_; }

private:
    int lane_count_;
    int completed_ = 0;
    bool any_timeout_ = false;
    double max_seconds_ = 0.0;
    Decision decision_;
};

// Races the original model and the streamlined models in parallel on one
// instance, stopping at the first solution. Under a simulated solver the
// lane concurrency is simulated in virtual time (deterministic, ties broken
// by lane order); otherwise each lane gets a thread and losing lanes are
// hard-killed. No child process survives the return.
RaceResult race(SolverInterface& solver, const ConstraintModel& model,
                const std::vector<Streamliner>& portfolio_members, const DataInstance& instance,
                double overall_limit_seconds, Clock& clock, RunLogger* logger = nullptr);

}  // namespace streamllm
