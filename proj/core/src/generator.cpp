#include "streamllm/generator.hpp"

#include <algorithm>
#include <cstdio>

namespace streamllm {

namespace {

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", s);
    return buf;
}

void log_event(RunLogger* logger, const std::string& event, const LogFields& fields) {
    if (logger != nullptr) logger->log(event, fields);
}

std::string discard_reason(const EvalMatrix& matrix, const std::string& id) {
    const auto& cells = matrix.row(id);
    for (const auto& cell : cells) {
        if (cell.status == SolveStatus::Error) return "error: " + cell.detail;
    }
    return "timed out on all training instances";
}

}  // namespace

std::string FeedbackReport::text() const {
    std::string out;
    for (const auto& line : lines) {
        if (!out.empty()) out += "\n";
        out += line.text;
    }
    return out;
}

FeedbackReport compose_feedback(const std::vector<Streamliner>& window,
                                const EvalMatrix& matrix) {
    FeedbackReport report;
    for (const auto& candidate : window) {
        const auto& cells = matrix.row(candidate.id);
        const int n = static_cast<int>(cells.size());
        int solved = 0, unsat = 0, timeout = 0;
        bool any_error = false;
        double candidate_total = 0.0, baseline_total = 0.0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const double t_base = matrix.baseline(matrix.instance_ids()[c]);
            baseline_total += t_base;
            switch (cells[c].status) {
                case SolveStatus::Sat:
                    ++solved;
                    candidate_total += cells[c].wall_seconds;
                    break;
                case SolveStatus::Unsat:
                    ++unsat;
                    candidate_total += t_base;
                    break;
                case SolveStatus::Timeout:
                    ++timeout;
                    candidate_total += t_base;
                    break;
                case SolveStatus::Error:
                    any_error = true;
                    candidate_total += t_base;
                    break;
            }
        }

        FeedbackLine line;
        line.slot_key = candidate.origin.slot_key;
        if (any_error) {
            line.category = "error";
            line.text = line.slot_key + ": produced a MiniZinc error";
        } else if (timeout == n) {
            line.category = "timeout_all";
            line.text = line.slot_key + ": timed out on all " + std::to_string(n) +
                        " training instances";
        } else if (unsat > 0) {
            line.category = "unsat_on_m_of_n";
            line.text = line.slot_key + ": unsatisfiable on " + std::to_string(unsat) + " of " +
                        std::to_string(n) + " instances";
        } else if (candidate_total < baseline_total) {
            line.category = "better_than_baseline";
            line.text = line.slot_key + ": better than the unstreamlined model (" +
                        fmt_seconds(candidate_total) + "s vs " + fmt_seconds(baseline_total) +
                        "s, " + std::to_string(solved) + "/" + std::to_string(n) + " solved)";
        } else {
            line.category = "worse_than_baseline";
            line.text = line.slot_key + ": worse than the unstreamlined model (" +
                        fmt_seconds(candidate_total) + "s vs " + fmt_seconds(baseline_total) +
                        "s, " + std::to_string(solved) + "/" + std::to_string(n) + " solved)";
        }
        report.lines.push_back(std::move(line));
    }
    return report;
}

CandidatePool run_generation(GenerationHooks hooks, const ConstraintModel& model,
                             const GradedTrainingSet& training, const GenerationConfig& cfg,
                             const PromptTemplate& tmpl, EvalMatrix& matrix) {
    cfg.validate();
    const bool adaptive = cfg.mode == GenerationMode::Adaptive;

    CandidatePool pool;
    pool.started_at = hooks.clock.now();

    std::vector<std::string> seen_texts;  // accepted and discarded alike
    std::optional<std::string> feedback;
    int consecutive_failures = 0;
    int next_id = 1;

    auto finish = [&] {
        pool.elapsed_seconds = hooks.clock.now() - pool.started_at;
        log_event(hooks.logger, "generation_done",
                  {{"iterations", std::to_string(pool.iteration)},
                   {"accepted", std::to_string(pool.accepted.size())},
                   {"discarded", std::to_string(pool.discarded.size())},
                   {"elapsed_seconds", fmt_seconds(pool.elapsed_seconds)}});
    };

    for (;;) {
        ++pool.iteration;
        const std::string prompt =
            render_prompt(tmpl, model, adaptive ? feedback : std::nullopt);
        log_event(hooks.logger, "prompt_sent",
                  {{"iteration", std::to_string(pool.iteration)},
                   {"variant", to_string(tmpl.variant)},
                   {"has_feedback", feedback && adaptive ? "true" : "false"},
                   {"text", prompt}});

        bool iteration_failed = false;
        std::vector<Streamliner> fresh;
        try {
            RawResponse response = hooks.client.query(prompt);
            log_event(hooks.logger, "response",
                      {{"iteration", std::to_string(pool.iteration)}, {"text", response.text}});

            ExtractedCandidates extracted = extract_streamliners(response, cfg.n_per_query);
            if (static_cast<int>(extracted.streamliners.size()) != cfg.n_per_query) {
                log_event(hooks.logger, "extraction_count_mismatch",
                          {{"iteration", std::to_string(pool.iteration)},
                           {"expected", std::to_string(cfg.n_per_query)},
                           {"keys_found", std::to_string(extracted.keys_found)},
                           {"accepted", std::to_string(extracted.streamliners.size())}});
            }
            for (auto& s : extracted.streamliners) {
                s.origin.provider = cfg.provider;
                s.origin.variant = cfg.prompt_variant;
                s.origin.iteration = pool.iteration;
            }
            fresh = dedup_candidates(seen_texts, extracted.streamliners);
            for (auto& s : fresh) {
                char id[16];
                std::snprintf(id, sizeof(id), "s%03d", next_id++);
                s.id = id;
                seen_texts.push_back(s.constraint_text);
            }
            log_event(hooks.logger, "extraction",
                      {{"iteration", std::to_string(pool.iteration)},
                       {"keys_found", std::to_string(extracted.keys_found)},
                       {"normalized", std::to_string(extracted.streamliners.size())},
                       {"new_after_dedup", std::to_string(fresh.size())}});
            consecutive_failures = 0;
        } catch (const FixtureError& e) {
            // End of a replayed run: stop cleanly with what we have.
            log_event(hooks.logger, "fixture_exhausted", {{"message", e.what()}});
            finish();
            return pool;
        } catch (const TransportError& e) {
            iteration_failed = true;
            log_event(hooks.logger, "transport_error",
                      {{"iteration", std::to_string(pool.iteration)}, {"message", e.what()}});
        } catch (const ExtractionError& e) {
            iteration_failed = true;
            log_event(hooks.logger, "extraction_error",
                      {{"iteration", std::to_string(pool.iteration)},
                       {"message", e.what()},
                       {"raw_text", e.raw_text()}});
        }

        if (iteration_failed) {
            if (++consecutive_failures >= 3) {
                pool.elapsed_seconds = hooks.clock.now() - pool.started_at;
                throw GenerationError("aborted after 3 consecutive provider failures", pool);
            }
        } else if (!fresh.empty()) {
            evaluate_candidates(hooks.solver, model, fresh, training, cfg, matrix);
            std::vector<std::string> fresh_ids;
            for (const auto& s : fresh) fresh_ids.push_back(s.id);
            const auto survivors = apply_discard_rule(matrix, fresh_ids);

            for (const auto& s : fresh) {
                const bool kept =
                    std::find(survivors.begin(), survivors.end(), s.id) != survivors.end();
                if (kept) {
                    pool.accepted.push_back(s);
                } else {
                    pool.discarded.emplace_back(s, discard_reason(matrix, s.id));
                }
                pool.window.push_back(s);
                log_event(hooks.logger, "discard_decision",
                          {{"iteration", std::to_string(pool.iteration)},
                           {"id", s.id},
                           {"slot", s.origin.slot_key},
                           {"kept", kept ? "true" : "false"},
                           {"reason", kept ? "" : discard_reason(matrix, s.id)}});
            }
        }

        if (adaptive && pool.iteration % 3 == 0) {
            pool.window.clear();
            log_event(hooks.logger, "feedback_window_reset",
                      {{"iteration", std::to_string(pool.iteration)}});
        }
        if (adaptive) {
            if (pool.window.empty()) {
                feedback.reset();
            } else {
                FeedbackReport report = compose_feedback(pool.window, matrix);
                feedback = report.text();
                log_event(hooks.logger, "feedback_composed",
                          {{"iteration", std::to_string(pool.iteration)},
                           {"lines", std::to_string(report.lines.size())},
                           {"text", *feedback}});
            }
        }

        if (hooks.clock.now() - pool.started_at >= cfg.budget_seconds) break;
    }
    finish();
    return pool;
}

}  // namespace streamllm
