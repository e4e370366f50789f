// Acceptance suite: one check per release criterion, one PASS/FAIL line
// each. Usage: streamllm_acceptance <path-to-cli> <source-dir>
//
// The last criterion needs a live MiniZinc with Chuffed and is skipped with
// a note when none is installed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "streamllm/clock.hpp"
#include "streamllm/errors.hpp"
#include "streamllm/evaluator.hpp"
#include "streamllm/generator.hpp"
#include "streamllm/llm_client.hpp"
#include "streamllm/obfuscator.hpp"
#include "streamllm/prompt.hpp"
#include "streamllm/racer.hpp"
#include "streamllm/reporter.hpp"
#include "streamllm/run_dir.hpp"
#include "streamllm/selector.hpp"
#include "streamllm/solver.hpp"
#include "streamllm/subprocess.hpp"
#include "support/extraction_corpus.hpp"
#include "support/test_util.hpp"

namespace fs = std::filesystem;
using namespace streamllm;
using namespace streamllm::testing;

namespace {

std::string g_cli_path;
std::string g_source_dir;

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Skip : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw CheckFailure(message);
}

template <typename T>
void require_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
        std::ostringstream ss;
        ss << what << ": got " << got << ", want " << want;
        throw CheckFailure(ss.str());
    }
}

// ---------------------------------------------------------------------------
// 1. Selector oracle equivalence

EvalMatrix random_matrix(std::mt19937_64& rng, int n_rows, int n_cols,
                         std::vector<std::string>& ids) {
    std::vector<std::string> cols;
    std::map<std::string, double> baselines;
    for (int c = 0; c < n_cols; ++c) {
        cols.push_back("i" + std::to_string(c + 1));
        baselines[cols.back()] = 1.0 + static_cast<double>(rng() % 19);
    }
    EvalMatrix matrix(cols, baselines);
    for (int r = 0; r < n_rows; ++r) {
        char id[16];
        std::snprintf(id, sizeof(id), "s%03d", r + 1);
        ids.push_back(id);
        std::vector<SolveOutcome> cells;
        for (int c = 0; c < n_cols; ++c) {
            const double t_base = baselines[cols[static_cast<std::size_t>(c)]];
            switch (rng() % 4) {
                case 0:
                case 1: {
                    double t = 0.25 * static_cast<double>(1 + rng() % 40);
                    cells.push_back(sat(std::min(t, t_base)));
                    break;
                }
                case 2: cells.push_back(timeout(t_base)); break;
                default: cells.push_back(unsat(0.5)); break;
            }
        }
        matrix.add_row(id, cells);
    }
    return matrix;
}

// Independent oracle: walk every k-subset by index triple and recompute the
// virtual-best sum straight from the cells.
double oracle_min_score(const EvalMatrix& matrix, const std::vector<std::string>& ids, int k) {
    const int n = static_cast<int>(ids.size());
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick;
    std::function<void(int)> walk = [&](int from) {
        if (static_cast<int>(pick.size()) == std::min(k, n)) {
            double total = 0.0;
            for (std::size_t c = 0; c < matrix.instance_ids().size(); ++c) {
                double cell_best = matrix.baseline(matrix.instance_ids()[c]);
                for (int idx : pick) {
                    const auto& cell = matrix.row(ids[static_cast<std::size_t>(idx)])[c];
                    if (cell.status == SolveStatus::Sat && cell.wall_seconds < cell_best) {
                        cell_best = cell.wall_seconds;
                    }
                }
                total += cell_best;
            }
            best = std::min(best, total);
            return;
        }
        for (int i = from; i < n; ++i) {
            pick.push_back(i);
            walk(i + 1);
            pick.pop_back();
        }
    };
    walk(0);
    return best;
}

void criterion_selector_oracle() {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::string> ids;
        const int n_rows = 3 + static_cast<int>(rng() % 10);  // up to 12 streamliners
        EvalMatrix matrix = random_matrix(rng, n_rows, 15, ids);
        Portfolio portfolio = select_k_best(matrix, ids, 3);
        const double expected = oracle_min_score(matrix, ids, 3);
        if (portfolio.score_seconds != expected) {
            throw CheckFailure("trial " + std::to_string(trial) + ": selector score " +
                               std::to_string(portfolio.score_seconds) + " != oracle " +
                               std::to_string(expected));
        }
        if (portfolio_score(matrix, portfolio.members) != expected) {
            throw CheckFailure("trial " + std::to_string(trial) +
                               ": members do not achieve the reported score");
        }
    }
}

// ---------------------------------------------------------------------------
// 2. Discard-rule truth table

void criterion_discard_truth_table() {
    const SolveStatus statuses[] = {SolveStatus::Sat, SolveStatus::Unsat, SolveStatus::Timeout,
                                    SolveStatus::Error};
    int rows = 0;
    for (SolveStatus a : statuses) {
        for (SolveStatus b : statuses) {
            for (SolveStatus c : statuses) {
                auto cell = [](SolveStatus s) {
                    return SolveOutcome{s, s == SolveStatus::Timeout ? 10.0 : 1.0, ""};
                };
                EvalMatrix matrix =
                    make_matrix({10, 10, 10}, {{"row", {cell(a), cell(b), cell(c)}}});
                const bool survived = !apply_discard_rule(matrix, {"row"}).empty();
                const bool any_error = a == SolveStatus::Error || b == SolveStatus::Error ||
                                       c == SolveStatus::Error;
                const bool all_timeout = a == SolveStatus::Timeout &&
                                         b == SolveStatus::Timeout &&
                                         c == SolveStatus::Timeout;
                require(survived == !(any_error || all_timeout),
                        "discard rule mismatch on combination " + std::to_string(rows));
                ++rows;
            }
        }
    }
    require_eq(rows, 64, "combinations enumerated");
}

// ---------------------------------------------------------------------------
// 3. Race semantics over all lane-status assignments

struct ExpectedRace {
    RaceStatus status;
    int winner_lane = -1;  // 0 = original
    double seconds = 0.0;
};

// Independent restatement of the race rules over scripted lane outcomes.
ExpectedRace race_oracle(const std::vector<SolveOutcome>& lanes) {
    std::vector<int> order(lanes.size());
    for (std::size_t i = 0; i < lanes.size(); ++i) order[static_cast<int>(i)] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return lanes[static_cast<std::size_t>(x)].wall_seconds <
               lanes[static_cast<std::size_t>(y)].wall_seconds;
    });
    bool any_timeout = false;
    double last = 0.0;
    for (int lane : order) {
        const auto& outcome = lanes[static_cast<std::size_t>(lane)];
        last = std::max(last, outcome.wall_seconds);
        if (outcome.status == SolveStatus::Sat) {
            return {RaceStatus::Sat, lane, outcome.wall_seconds};
        }
        if (outcome.status == SolveStatus::Unsat && lane == 0) {
            return {RaceStatus::Unsat, -1, outcome.wall_seconds};
        }
        if (outcome.status == SolveStatus::Timeout) any_timeout = true;
    }
    return {any_timeout ? RaceStatus::Timeout : RaceStatus::Exhausted, -1, last};
}

void criterion_race_semantics() {
    const double limit = 100.0;
    const SolveStatus statuses[] = {SolveStatus::Sat, SolveStatus::Unsat, SolveStatus::Timeout,
                                    SolveStatus::Error};
    const std::vector<std::vector<double>> time_patterns = {
        {5.0, 10.0, 15.0, 20.0},
        {20.0, 15.0, 10.0, 5.0},
        {7.0, 7.0, 7.0, 7.0},
        {12.0, 3.0, 12.0, 3.0},
    };
    const ConstraintModel model{"toy", "int: x;\nsolve satisfy;", "inline"};
    const DataInstance instance{"t1", "n = 1;", InstanceRole::Test, std::nullopt};
    const std::vector<Streamliner> members{make_streamliner("s1", "constraint one;"),
                                           make_streamliner("s2", "constraint two;"),
                                           make_streamliner("s3", "constraint three;")};
    const char* texts[] = {"constraint one;", "constraint two;", "constraint three;"};

    int combos = 0;
    for (const auto& times : time_patterns) {
        for (int mask = 0; mask < 256; ++mask) {
            std::vector<SolveOutcome> lanes(4);
            for (int lane = 0; lane < 4; ++lane) {
                const SolveStatus status = statuses[(mask >> (2 * lane)) & 3];
                // A lane that times out completes at the overall limit.
                const double t = status == SolveStatus::Timeout
                                     ? limit
                                     : times[static_cast<std::size_t>(lane)];
                lanes[static_cast<std::size_t>(lane)] = {status, t, ""};
            }

            FakeSolverScript script;
            script.script_name("toy", instance.id, lanes[0]);
            for (int i = 0; i < 3; ++i) {
                script.script_contains(texts[i], instance.id, lanes[static_cast<std::size_t>(i + 1)]);
            }
            auto clock = std::make_shared<VirtualClock>();
            FakeSolver solver(std::move(script), clock);

            RaceResult result = race(solver, model, members, instance, limit, *clock);
            const ExpectedRace expected = race_oracle(lanes);

            require(result.status == expected.status,
                    "status mismatch in combo " + std::to_string(combos));
            if (expected.status == RaceStatus::Sat) {
                const std::string want_winner =
                    expected.winner_lane == 0 ? "original"
                                              : members[static_cast<std::size_t>(
                                                            expected.winner_lane - 1)].id;
                require(result.winner == want_winner,
                        "winner mismatch in combo " + std::to_string(combos));
                require(result.winning_seconds == expected.seconds,
                        "winner time mismatch in combo " + std::to_string(combos));
                // (b) the winner is the minimum-virtual-time SAT lane among
                // those reachable before a race-ending original UNSAT
                double min_sat = std::numeric_limits<double>::infinity();
                for (const auto& lane : lanes) {
                    if (lane.status == SolveStatus::Sat) {
                        min_sat = std::min(min_sat, lane.wall_seconds);
                    }
                }
                require(result.winning_seconds <= min_sat + 1e-12,
                        "winner is not the fastest SAT lane in combo " + std::to_string(combos));
            } else {
                require(!result.winner.has_value(),
                        "unexpected winner in combo " + std::to_string(combos));
            }
            // (a) race-level UNSAT iff the original lane is UNSAT and no SAT
            // lane finishes earlier (ties resolve toward the original).
            bool unsat_expected = lanes[0].status == SolveStatus::Unsat;
            if (unsat_expected) {
                for (std::size_t i = 1; i < 4; ++i) {
                    if (lanes[i].status == SolveStatus::Sat &&
                        lanes[i].wall_seconds < lanes[0].wall_seconds) {
                        unsat_expected = false;
                    }
                }
            }
            require((result.status == RaceStatus::Unsat) == unsat_expected,
                    "UNSAT rule violated in combo " + std::to_string(combos));
            // (c) nothing left running
            require_eq(active_child_count(), 0, "child processes after race");
            ++combos;
        }
    }
    require_eq(combos, 1024, "race combinations checked");
}

// ---------------------------------------------------------------------------
// 4. Generator budget and cadence

void criterion_generator_budget() {
    TempDir dir;
    for (int i = 1; i <= 10; ++i) {
        nlohmann::ordered_json j;
        for (int c = 1; c <= 5; ++c) {
            j["streamliner_" + std::to_string(c)] =
                "constraint r" + std::to_string(i) + "c" + std::to_string(c) + " >= 0;";
        }
        char name[48];
        std::snprintf(name, sizeof(name), "fixtures/%03d.txt", i - 1);
        write_file(dir.file(name), j.dump());
    }

    GradedTrainingSet graded;
    for (int i = 1; i <= 3; ++i) {
        graded.kept.push_back({"i" + std::to_string(i), "n = 1;", InstanceRole::Training, 10.0});
    }
    const ConstraintModel model{"toy", "int: x;\nsolve satisfy;", "inline"};

    auto run_mode = [&](GenerationMode mode, double budget, MemoryLogger& logger) {
        FakeRig rig{FakeSolverScript(sat(8.0))};  // 5 x 3 x 8 s = 120 s per iteration
        LlmClient client(ProviderConfig::fixture(dir.file("fixtures")));
        GenerationConfig cfg;
        cfg.mode = mode;
        cfg.budget_seconds = budget;
        cfg.provider = "fixture";
        std::vector<std::string> ids;
        std::map<std::string, double> baselines;
        for (const auto& inst : graded.kept) {
            ids.push_back(inst.id);
            baselines[inst.id] = *inst.baseline_seconds;
        }
        EvalMatrix matrix(ids, baselines);
        return run_generation({*rig.solver, client, *rig.clock, &logger}, model, graded, cfg,
                              PromptTemplate::for_variant(PromptVariant::P1), matrix);
    };

    MemoryLogger static_log;
    CandidatePool pool = run_mode(GenerationMode::Static, 600.0, static_log);
    require_eq(pool.iteration, 5, "iterations under a 600 s budget");
    require(pool.elapsed_seconds == 600.0, "elapsed time at the budget boundary");
    int prompts = 0;
    for (const auto& e : static_log.entries) {
        if (e.event == "prompt_sent") ++prompts;
    }
    require_eq(prompts, 5, "no iteration starts after expiry");

    MemoryLogger adaptive_log;
    CandidatePool adaptive_pool = run_mode(GenerationMode::Adaptive, 720.0, adaptive_log);
    require_eq(adaptive_pool.iteration, 6, "iterations under a 720 s budget");
    std::vector<std::string> resets;
    std::vector<std::string> feedback_flags;
    for (const auto& e : adaptive_log.entries) {
        if (e.event == "feedback_window_reset") {
            for (const auto& [k, v] : e.fields) {
                if (k == "iteration") resets.push_back(v);
            }
        }
        if (e.event == "prompt_sent") {
            for (const auto& [k, v] : e.fields) {
                if (k == "has_feedback") feedback_flags.push_back(v);
            }
        }
    }
    require(resets == std::vector<std::string>{"3", "6"}, "window resets after iterations 3 and 6");
    require(feedback_flags ==
                std::vector<std::string>{"false", "true", "true", "false", "true", "true"},
            "feedback cadence across the reset");
}

// ---------------------------------------------------------------------------
// 5. Metric formulas

void criterion_metric_formulas() {
    const struct {
        double speedup;
        double expected;
    } quads[] = {{1.71, 42.0}, {6.77, 85.0}, {2.53, 60.0}, {2.34, 57.0}};
    for (const auto& q : quads) {
        const double reduction = time_reduction(3600.0, 3600.0 / q.speedup);
        require(std::abs(std::round(reduction) - q.expected) <= 0.5,
                "speedup " + std::to_string(q.speedup) + " maps to " + std::to_string(reduction));
    }
    for (double t_orig : {600.0, 3600.0, 47.5}) {
        for (double t_stream : {10.0, 400.0, 600.0, 5000.0}) {
            require(net_saving(t_orig, t_stream, 0.0) == time_reduction(t_orig, t_stream),
                    "net_saving(t, s, 0) differs from time_reduction");
        }
    }
    require(is_significant(600.0, 560.0), "(600, 560) is significant at 6.38%");
    require(!is_significant(600.0, 562.0), "(600, 562) is not significant at 6.38%");
}

// ---------------------------------------------------------------------------
// 6. Extraction robustness

void criterion_extraction() {
    const auto& corpus = extraction_corpus();
    require(corpus.size() >= 20, "corpus has at least 20 responses");
    for (const auto& c : corpus) {
        RawResponse response;
        response.text = c.response;
        if (c.expect_error) {
            try {
                extract_streamliners(response, 5);
                throw CheckFailure(c.name + ": expected ExtractionError");
            } catch (const ExtractionError&) {
            }
            continue;
        }
        ExtractedCandidates out = extract_streamliners(response, 5);
        require_eq(out.streamliners.size(), c.expected_texts.size(), c.name + ": count");
        for (std::size_t i = 0; i < c.expected_texts.size(); ++i) {
            require_eq(out.streamliners[i].constraint_text, c.expected_texts[i],
                       c.name + ": text " + std::to_string(i));
            const auto& s = out.streamliners[i];
            require(s.constraint_text.rfind("constraint", 0) == 0 &&
                        s.constraint_text.back() == ';' &&
                        normalize_streamliner(s.constraint_text) == s.constraint_text,
                    c.name + ": invariant violated");
        }
    }
}

// ---------------------------------------------------------------------------
// 7. End-to-end fixture replay, bit-identical run directories

int run_cli(const std::string& cwd, const std::string& args) {
    ProcessResult result =
        run_process({"/bin/sh", "-c", "cd '" + cwd + "' && '" + g_cli_path + "' " + args},
                    120.0);
    if (result.killed || result.exit_code != 0) {
        throw CheckFailure("cli failed (" + args + "): " + result.stderr_text +
                           result.stdout_text);
    }
    return result.exit_code;
}

void write_e2e_workspace(const std::string& root) {
    write_file(root + "/model.mzn",
               "int: n;\narray[1..n] of var 1..n: x;\nconstraint x[1] <= x[n];\nsolve satisfy;\n");
    for (int i = 1; i <= 6; ++i) {
        write_file(root + "/train/t" + std::to_string(i) + ".dzn",
                   "n = " + std::to_string(i + 2) + ";\n");
    }
    write_file(root + "/test/h1.dzn", "n = 40;\n");
    write_file(root + "/test/h2.dzn", "n = 50;\n");
    write_file(root + "/baselines.json", "{\"h1\": 3600, \"h2\": 5400}\n");

    // Three rounds of five candidates; some error out or time out so the
    // discard path is exercised.
    std::vector<std::vector<std::string>> rounds = {
        {"constraint x[1] = 1;", "constraint x[2] > x[1];", "constraint broken_syntax;",
         "constraint x[n] = n;", "constraint sum(x) > 0;"},
        {"constraint x[1] = 1;", "constraint forall(i in 1..n-1)(x[i] <= x[i+1]);",
         "constraint hopeless_slow;", "constraint x[2] = 2;", "constraint x[3] >= 1;"},
        {"constraint alldifferent(x);", "constraint x[n] >= x[1];", "constraint x[1] < 2;",
         "constraint partial_unsat;", "constraint x[2] <= n;"},
    };
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        nlohmann::ordered_json j;
        for (std::size_t c = 0; c < rounds[r].size(); ++c) {
            j["streamliner_" + std::to_string(c + 1)] = rounds[r][c];
        }
        char name[48];
        std::snprintf(name, sizeof(name), "/fixtures/%03zu.txt", r);
        write_file(root + name, j.dump());
    }

    nlohmann::ordered_json script;
    script["default"] = {{"status", "SAT"}, {"seconds", 4.0}};
    auto entries = nlohmann::ordered_json::array();
    auto add = [&](const std::string& match, const std::string& instance,
                   const std::string& status, double seconds) {
        entries.push_back({{"match", match},
                           {"instance", instance},
                           {"status", status},
                           {"seconds", seconds}});
    };
    // training baselines: t1..t6 between 2 and 9 seconds
    for (int i = 1; i <= 6; ++i) {
        add("name:model", "t" + std::to_string(i), "SAT", 2.0 + i);
    }
    for (int i = 1; i <= 6; ++i) {
        const std::string inst = "t" + std::to_string(i);
        add("contains:constraint broken_syntax;", inst, "ERROR", 0.1);
        add("contains:constraint hopeless_slow;", inst, "SAT", 9999.0);  // times out per column
        add("contains:constraint partial_unsat;", inst, i % 2 == 0 ? "UNSAT" : "SAT", 1.0);
        add("contains:constraint x[1] = 1;", inst, "SAT", 1.0);
        add("contains:constraint alldifferent(x);", inst, "SAT", 0.5);
    }
    // races on the two hard instances
    for (const std::string inst : {"h1", "h2"}) {
        add("name:model", inst, "SAT", 3600.0);
        add("contains:constraint alldifferent(x);", inst, "SAT", inst == "h1" ? 120.0 : 90.0);
        add("contains:constraint x[1] = 1;", inst, "UNSAT", 60.0);
    }
    script["entries"] = entries;
    write_file(root + "/solver.json", script.dump(2));
}

void run_e2e_pipeline(const std::string& root) {
    run_cli(root,
            "grade --model model.mzn --data train --out run --fake-solver solver.json "
            "--ttrain-floor 1 --ttrain-cap 10 --ntrain 4 --seed 7");
    run_cli(root,
            "generate --run run --provider fixture --fixture fixtures --fake-solver solver.json "
            "--budget 200 --n 5 --k 3 --seed 7");
    run_cli(root,
            "race --run run --data test --fake-solver solver.json --baselines baselines.json "
            "--limit 7200");
    run_cli(root, "report run");
}

void compare_trees(const fs::path& a, const fs::path& b) {
    std::vector<std::string> rel_a, rel_b;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a).string());
    }
    for (const auto& entry : fs::recursive_directory_iterator(b)) {
        if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b).string());
    }
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    require(rel_a == rel_b, "run directories hold different file sets");
    for (const auto& rel : rel_a) {
        const std::string file_a = read_file((a / rel).string());
        const std::string file_b = read_file((b / rel).string());
        require(file_a == file_b, "file differs between runs: " + rel);
    }
}

void criterion_e2e_replay() {
    TempDir workspace_a, workspace_b;
    write_e2e_workspace(workspace_a.path());
    write_e2e_workspace(workspace_b.path());
    run_e2e_pipeline(workspace_a.path());
    run_e2e_pipeline(workspace_b.path());

    // Sanity on the pipeline outcome before the byte comparison.
    RunDirectory run = RunDirectory::open(workspace_a.file("run"));
    auto members = run.load_portfolio();
    require(!members.empty(), "pipeline selected a portfolio");
    auto races = run.load_races();
    require_eq(races.size(), std::size_t{2}, "raced instances");
    require(run.has("report.json") && run.has("report.txt"), "report written");

    compare_trees(workspace_a.file("run"), workspace_b.file("run"));
}

// ---------------------------------------------------------------------------
// 8. Obfuscator round-trip on the bundled models

void criterion_obfuscator_roundtrip() {
    for (const char* rel : {"models/hypergraph_coloring.mzn", "models/shift_toy.mzn"}) {
        const std::string path = g_source_dir + "/" + rel;
        ConstraintModel model{"m", read_file(path), path};
        require(!model.source_text.empty(), std::string("missing bundled model: ") + rel);

        ObfuscationResult result = obfuscate(model, 9, {});
        const std::string back =
            apply_rename(result.model.source_text, result.map.inverse(), false);
        require(back == strip_comments_text(model.source_text),
                std::string(rel) + ": inverse map does not restore the original");

        // Token structure: the non-comment token stream matches kind for kind.
        auto stripped = tokenize_minizinc(strip_comments_text(model.source_text));
        auto renamed = tokenize_minizinc(result.model.source_text);
        std::vector<TokenKind> kinds_a, kinds_b;
        for (const auto& t : stripped) {
            if (t.kind != TokenKind::Other) kinds_a.push_back(t.kind);
        }
        for (const auto& t : renamed) {
            if (t.kind != TokenKind::Other) kinds_b.push_back(t.kind);
        }
        require(kinds_a == kinds_b, std::string(rel) + ": token structure changed");
    }
}

// ---------------------------------------------------------------------------
// 9. Optional live smoke with a real MiniZinc

bool minizinc_available() {
    try {
        ProcessResult v = run_process({"minizinc", "--version"}, 10.0);
        if (v.exit_code != 0) return false;
        ProcessResult s = run_process({"minizinc", "--solvers"}, 10.0);
        return s.stdout_text.find("chuffed") != std::string::npos ||
               s.stdout_text.find("Chuffed") != std::string::npos;
    } catch (const EnvironmentError&) {
        return false;
    }
}

void criterion_live_smoke() {
    if (!minizinc_available()) {
        throw Skip("minizinc with chuffed not installed");
    }
    const std::string model_path = g_source_dir + "/models/hypergraph_coloring.mzn";
    ConstraintModel model{"hypergraph_coloring", read_file(model_path), model_path};
    auto instances =
        load_instances_from_dir(g_source_dir + "/models/hc_train", InstanceRole::Training);
    require_eq(instances.size(), std::size_t{15}, "bundled training instances");

    TempDir dir;
    // Curated candidates that genuinely narrow this model's search space.
    nlohmann::ordered_json j;
    j["streamliner_1"] = "constraint color[1] = 1;";
    j["streamliner_2"] =
        "constraint forall(c in 1..n_colors)(class_size[c] <= (n_vertices div n_colors) + 1);";
    j["streamliner_3"] = "constraint class_size[1] >= class_size[n_colors];";
    j["streamliner_4"] = "constraint color[1] = 1 /\\ color[2] <= 2;";
    j["streamliner_5"] =
        "constraint forall(c in 1..n_colors)(class_size[c] >= (n_vertices div n_colors) - 1);";
    write_file(dir.file("fixtures/000.txt"), j.dump());

    WallClock clock;
    MiniZincSolver solver(SolverConfig{});
    GenerationConfig cfg;
    cfg.provider = "fixture";
    cfg.budget_seconds = 300.0;
    cfg.t_train_floor = 0.01;  // wall-clock scale varies by machine
    cfg.max_parallel_solves = 4;

    GradedTrainingSet graded = grade_baselines(solver, model, instances, cfg, 7);
    require(graded.kept.size() >= 3, "usable live training instances");

    std::vector<std::string> ids;
    std::map<std::string, double> baselines;
    for (const auto& inst : graded.kept) {
        ids.push_back(inst.id);
        baselines[inst.id] = *inst.baseline_seconds;
    }
    EvalMatrix matrix(ids, baselines);
    LlmClient client(ProviderConfig::fixture(dir.file("fixtures")));
    CandidatePool pool =
        run_generation({solver, client, clock, nullptr}, model, graded, cfg,
                       PromptTemplate::for_variant(PromptVariant::P1), matrix);
    require(!pool.accepted.empty(), "live pool is non-empty");

    std::vector<std::string> surviving;
    for (const auto& s : pool.accepted) surviving.push_back(s.id);
    Portfolio portfolio = select_k_best(matrix, surviving, 3);
    const double baseline_total = matrix.total_baseline();
    require(portfolio.score_seconds <= baseline_total,
            "portfolio virtual-best exceeds the unstreamlined total");
    std::printf("      live improvement: %.1f%% (portfolio %.2fs vs baseline %.2fs)\n",
                100.0 * (baseline_total - portfolio.score_seconds) / baseline_total,
                portfolio.score_seconds, baseline_total);

    // Obfuscated model solves to the same status on two bundled instances.
    std::vector<DataInstance> sample(instances.begin(), instances.begin() + 2);
    ObfuscationResult obf = obfuscate(model, 9, sample);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        SolveOutcome original = solver.solve(model, sample[i], 30.0);
        SolveOutcome renamed = solver.solve(obf.model, obf.data[i], 30.0);
        require(original.status == renamed.status,
                "obfuscated solve status differs on " + sample[i].id);
    }
}

struct Criterion {
    int number;
    std::string name;
    std::function<void()> run;
    bool optional = false;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <streamllm-cli> <source-dir>\n", argv[0]);
        return 2;
    }
    g_cli_path = fs::absolute(argv[1]).string();
    g_source_dir = fs::absolute(argv[2]).string();

    const std::vector<Criterion> criteria = {
        {1, "selector equals the brute-force oracle on 1000 random matrices",
         criterion_selector_oracle},
        {2, "discard rule matches the 64-row truth table", criterion_discard_truth_table},
        {3, "race semantics hold over all lane-status assignments", criterion_race_semantics},
        {4, "generator respects the budget and the every-third-iteration reset",
         criterion_generator_budget},
        {5, "metric formulas reproduce the reference values", criterion_metric_formulas},
        {6, "extraction handles the crafted-response corpus", criterion_extraction},
        {7, "fixture replay yields bit-identical run directories", criterion_e2e_replay},
        {8, "obfuscation round-trips on the bundled models", criterion_obfuscator_roundtrip},
        {9, "live smoke: portfolio beats the baseline and obfuscation preserves status",
         criterion_live_smoke, true},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::printf("PASS  criterion %d: %s (%.2fs)\n", criterion.number,
                        criterion.name.c_str(), secs);
        } catch (const Skip& skip) {
            std::printf("SKIP  criterion %d (optional): %s -- %s\n", criterion.number,
                        criterion.name.c_str(), skip.what());
        } catch (const std::exception& e) {
            std::printf("FAIL  criterion %d: %s -- %s\n", criterion.number,
                        criterion.name.c_str(), e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
