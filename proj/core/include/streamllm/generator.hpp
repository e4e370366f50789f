#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamllm/clock.hpp"
#include "streamllm/errors.hpp"
#include "streamllm/evaluator.hpp"
#include "streamllm/llm_client.hpp"
#include "streamllm/model.hpp"
#include "streamllm/prompt.hpp"
#include "streamllm/run_log.hpp"
#include "streamllm/solver.hpp"

namespace streamllm {

// The accumulated candidate state of a generation run. `accepted` only ever
// grows; `window` holds everything seen since the last adaptive reset
// (survivors and discards alike) because the feedback must be able to say
// that a candidate errored or timed out.
struct CandidatePool {
    std::vector<Streamliner> accepted;
    std::vector<Streamliner> window;
    std::vector<std::pair<Streamliner, std::string>> discarded;  // with reason
    int iteration = 0;
    double started_at = 0.0;
    double elapsed_seconds = 0.0;
};

struct FeedbackLine {
    std::string slot_key;
    std::string category;  // error | timeout_all | unsat_on_m_of_n |
                           // better_than_baseline | worse_than_baseline
    std::string text;
};

struct FeedbackReport {
    std::vector<FeedbackLine> lines;
    std::string text() const;
};

// Aborted generation run; carries whatever the loop had accumulated so the
// caller can persist partial artifacts.
class GenerationError : public std::runtime_error {
public:
    GenerationError(const std::string& msg, CandidatePool partial)
        : std::runtime_error(msg), partial_(std::move(partial)) {}
    const CandidatePool& partial_pool() const { return partial_; }

private:
    CandidatePool partial_;
};

// One line per window candidate. Better/worse compares the candidate's
// total time (unsolved instances charged at the baseline) against the total
// baseline over the training set. Same rows give byte-identical text.
FeedbackReport compose_feedback(const std::vector<Streamliner>& window, const EvalMatrix& matrix);

struct GenerationHooks {
    SolverInterface& solver;
    LlmClient& client;
    Clock& clock;
    RunLogger* logger = nullptr;  // optional
};

// The query -> extract -> evaluate -> discard -> accumulate loop, repeated
// until the wall budget is spent (checked only at loop boundaries, so an
// iteration in flight at expiry finishes and its candidates count). In
// adaptive mode the feedback window is cleared every third iteration.
// Three consecutive transport or extraction failures raise GenerationError;
// a drained replay fixture simply ends the run.
CandidatePool run_generation(GenerationHooks hooks, const ConstraintModel& model,
                             const GradedTrainingSet& training, const GenerationConfig& cfg,
                             const PromptTemplate& tmpl, EvalMatrix& matrix);

}  // namespace streamllm
