#include "streamllm/racer.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <numeric>
#include <thread>

#include "streamllm/errors.hpp"

namespace streamllm {

namespace {

LaneDisposition disposition_from(const SolveOutcome& outcome) {
    switch (outcome.status) {
        case SolveStatus::Sat: return LaneDisposition::Sat;
        case SolveStatus::Unsat: return LaneDisposition::Unsat;
        case SolveStatus::Timeout:
            return outcome.detail == "cancelled" ? LaneDisposition::Cancelled
                                                 : LaneDisposition::Timeout;
        case SolveStatus::Error: return LaneDisposition::Error;
    }
    return LaneDisposition::Error;
}

void log_lane(RunLogger* logger, const std::string& instance_id, const LaneRecord& record) {
    if (logger == nullptr) return;
    char secs[32];
    std::snprintf(secs, sizeof(secs), "%.3f", record.seconds);
    logger->log("race_lane", {{"instance", instance_id},
                              {"lane", record.lane_id},
                              {"disposition", to_string(record.disposition)},
                              {"seconds", secs},
                              {"detail", record.detail}});
}

}  // namespace

const char* to_string(RaceStatus s) {
    switch (s) {
        case RaceStatus::Sat: return "SAT";
        case RaceStatus::Unsat: return "UNSAT";
        case RaceStatus::Exhausted: return "EXHAUSTED";
        case RaceStatus::Timeout: return "TIMEOUT";
    }
    return "EXHAUSTED";
}

const char* to_string(LaneDisposition d) {
    switch (d) {
        case LaneDisposition::Sat: return "sat";
        case LaneDisposition::Unsat: return "unsat";
        case LaneDisposition::Timeout: return "timeout";
        case LaneDisposition::Error: return "error";
        case LaneDisposition::Cancelled: return "cancelled";
    }
    return "cancelled";
}

std::vector<RaceLane> build_race_lanes(const ConstraintModel& model,
                                       const std::vector<Streamliner>& portfolio_members) {
    std::vector<RaceLane> lanes;
    lanes.push_back({kOriginalLane, model});
    for (const auto& s : portfolio_members) {
        lanes.push_back({s.id, compose_streamlined_model(model, s)});
    }
    return lanes;
}

RaceArbiter::Decision RaceArbiter::on_completion(int lane_index, const SolveOutcome& outcome) {
    if (decision_.decided) return decision_;
    ++completed_;
    if (outcome.status == SolveStatus::Sat) {
        decision_ = {true, RaceStatus::Sat, lane_index, outcome.wall_seconds};
        return decision_;
    }
    if (outcome.status == SolveStatus::Unsat && lane_index == 0) {
        decision_ = {true, RaceStatus::Unsat, -1, outcome.wall_seconds};
        return decision_;
    }
    if (outcome.status == SolveStatus::Timeout) any_timeout_ = true;
    max_seconds_ = std::max(max_seconds_, outcome.wall_seconds);
    if (completed_ == lane_count_) {
        decision_ = {true, any_timeout_ ? RaceStatus::Timeout : RaceStatus::Exhausted, -1,
                     max_seconds_};
    }
    return decision_;
}

RaceArbiter::Decision RaceArbiter::final_decision() const {
    if (decision_.decided) return decision_;
    return {true, any_timeout_ ? RaceStatus::Timeout : RaceStatus::Exhausted, -1, max_seconds_};
}

namespace {

RaceResult race_simulated(SolverInterface& solver, const std::vector<RaceLane>& lanes,
                          const DataInstance& instance, double limit_seconds, Clock& clock,
                          RunLogger* logger) {
    const int n = static_cast<int>(lanes.size());
    std::vector<SolveOutcome> outcomes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto peeked = solver.peek_outcome(lanes[static_cast<std::size_t>(i)].model, instance,
                                          limit_seconds);
        if (!peeked) {
            throw EnvironmentError("simulated race requires a peekable solver");
        }
        outcomes[static_cast<std::size_t>(i)] = *peeked;
    }

    // Virtual arrival order: completion time, then lane order (original
    // first) on ties.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return outcomes[static_cast<std::size_t>(a)].wall_seconds <
               outcomes[static_cast<std::size_t>(b)].wall_seconds;
    });

    RaceArbiter arbiter(n);
    std::vector<bool> fed(static_cast<std::size_t>(n), false);
    for (int lane : order) {
        fed[static_cast<std::size_t>(lane)] = true;
        if (arbiter.on_completion(lane, outcomes[static_cast<std::size_t>(lane)]).decided) break;
    }
    const RaceArbiter::Decision decision = arbiter.final_decision();

    RaceResult result;
    result.instance_id = instance.id;
    result.status = decision.status;
    result.winning_seconds = decision.seconds;
    if (decision.status == RaceStatus::Sat) {
        result.winner = lanes[static_cast<std::size_t>(decision.winner_lane)].lane_id;
    }
    for (int i = 0; i < n; ++i) {
        LaneRecord record;
        record.lane_id = lanes[static_cast<std::size_t>(i)].lane_id;
        if (fed[static_cast<std::size_t>(i)]) {
            record.disposition = disposition_from(outcomes[static_cast<std::size_t>(i)]);
            record.seconds = outcomes[static_cast<std::size_t>(i)].wall_seconds;
            record.detail = outcomes[static_cast<std::size_t>(i)].detail;
        } else {
            record.disposition = LaneDisposition::Cancelled;
            record.seconds = decision.seconds;
            record.detail = "race decided";
        }
        log_lane(logger, instance.id, record);
        result.lanes.push_back(std::move(record));
    }

    // All lanes ran concurrently; the race occupies the decision span.
    if (auto* virtual_clock = dynamic_cast<VirtualClock*>(&clock)) {
        virtual_clock->advance(decision.seconds);
    }
    return result;
}

RaceResult race_threaded(SolverInterface& solver, const std::vector<RaceLane>& lanes,
                         const DataInstance& instance, double limit_seconds,
                         RunLogger* logger) {
    const int n = static_cast<int>(lanes.size());
    std::vector<CancelToken> tokens(static_cast<std::size_t>(n));
    std::vector<SolveOutcome> outcomes(static_cast<std::size_t>(n));

    struct Completion {
        int lane;
        SolveOutcome outcome;
    };
    std::mutex mutex;
    std::condition_variable cv;
    std::vector<Completion> queue;
    std::exception_ptr lane_error;

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        threads.emplace_back([&, i] {
            try {
                SolveOutcome outcome =
                    solver.solve(lanes[static_cast<std::size_t>(i)].model, instance,
                                 limit_seconds, &tokens[static_cast<std::size_t>(i)]);
                std::lock_guard<std::mutex> lock(mutex);
                queue.push_back({i, std::move(outcome)});
                cv.notify_all();
            } catch (...) {
                // Abort the whole race; letting the other lanes run to
                // their limit would stall the rethrow for hours.
                for (auto& t : tokens) t.cancel();
                std::lock_guard<std::mutex> lock(mutex);
                if (!lane_error) lane_error = std::current_exception();
                queue.push_back({i, SolveOutcome{SolveStatus::Error, 0.0, "lane exception"}});
                cv.notify_all();
            }
        });
    }

    RaceArbiter arbiter(n);
    int received = 0;
    {
        std::unique_lock<std::mutex> lock(mutex);
        std::size_t cursor = 0;
        while (received < n) {
            cv.wait(lock, [&] { return queue.size() > cursor; });
            while (cursor < queue.size()) {
                const Completion& c = queue[cursor++];
                ++received;
                outcomes[static_cast<std::size_t>(c.lane)] = c.outcome;
                const bool was_decided = arbiter.decided();
                arbiter.on_completion(c.lane, c.outcome);
                if (!was_decided && arbiter.decided()) {
                    for (auto& t : tokens) t.cancel();
                }
            }
        }
    }
    for (auto& t : threads) t.join();
    if (lane_error) std::rethrow_exception(lane_error);

    const RaceArbiter::Decision decision = arbiter.final_decision();
    RaceResult result;
    result.instance_id = instance.id;
    result.status = decision.status;
    result.winning_seconds = decision.seconds;
    if (decision.status == RaceStatus::Sat) {
        result.winner = lanes[static_cast<std::size_t>(decision.winner_lane)].lane_id;
    }
    for (int i = 0; i < n; ++i) {
        LaneRecord record;
        record.lane_id = lanes[static_cast<std::size_t>(i)].lane_id;
        record.disposition = disposition_from(outcomes[static_cast<std::size_t>(i)]);
        record.seconds = outcomes[static_cast<std::size_t>(i)].wall_seconds;
        record.detail = outcomes[static_cast<std::size_t>(i)].detail;
        log_lane(logger, instance.id, record);
        result.lanes.push_back(std::move(record));
    }
    return result;
}

}  // namespace

RaceResult race(SolverInterface& solver, const ConstraintModel& model,
                const std::vector<Streamliner>& portfolio_members, const DataInstance& instance,
                double overall_limit_seconds, Clock& clock, RunLogger* logger) {
    const auto lanes = build_race_lanes(model, portfolio_members);
    RaceResult result =
        solver.is_simulated()
            ? race_simulated(solver, lanes, instance, overall_limit_seconds, clock, logger)
            : race_threaded(solver, lanes, instance, overall_limit_seconds, logger);
    if (logger != nullptr) {
        char secs[32];
        std::snprintf(secs, sizeof(secs), "%.3f", result.winning_seconds);
        logger->log("race_summary",
                    {{"instance", instance.id},
                     {"status", to_string(result.status)},
                     {"winner", result.winner.value_or("")},
                     {"winning_seconds", secs}});
    }
    return result;
}

}  // namespace streamllm
