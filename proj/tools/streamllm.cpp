// streamllm: generate streamlining constraints for a MiniZinc decision model
// with an LLM, vet them on small training instances, pick the k best, and
// race the streamlined models against the original on hard instances.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "streamllm/clock.hpp"
#include "streamllm/errors.hpp"
#include "streamllm/evaluator.hpp"
#include "streamllm/generator.hpp"
#include "streamllm/llm_client.hpp"
#include "streamllm/model.hpp"
#include "streamllm/obfuscator.hpp"
#include "streamllm/prompt.hpp"
#include "streamllm/racer.hpp"
#include "streamllm/reporter.hpp"
#include "streamllm/run_dir.hpp"
#include "streamllm/selector.hpp"
#include "streamllm/solver.hpp"

namespace fs = std::filesystem;
using namespace streamllm;

namespace {

struct CliOptions {
    std::string model_path;
    std::string data_dir;
    std::string run_dir;
    std::string out;
    std::string mode = "static";
    std::string prompt = "p1";
    std::string provider = "fixture";
    double budget = 600.0;
    int n = 5;
    int k = 3;
    double ttrain_cap = 10.0;
    double ttrain_floor = 1.0;
    int ntrain = 15;
    double threshold = kDefaultSignificanceThreshold;
    int max_parallel = 4;
    std::uint64_t seed = 0;
    std::string solver_exe = "minizinc";
    std::string backend = "chuffed";
    std::string fixture_dir;
    std::string fake_solver_script;
    std::string baselines_file;
    double limit = kDefaultRaceLimitSeconds;
    int copies = 4;
    bool keep_comments = false;
    std::vector<std::string> data_files;
    std::vector<std::string> run_dirs;
};

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ConstraintModel load_model_file(const std::string& path) {
    ConstraintModel model;
    model.name = fs::path(path).stem().string();
    model.source_text = slurp_file(path);
    model.origin_path = path;
    if (model.source_text.empty()) throw ConfigError("model file is empty: " + path);
    return model;
}

struct Runtime {
    std::shared_ptr<VirtualClock> virtual_clock;  // set iff the solver is fake
    std::unique_ptr<WallClock> wall_clock;
    Clock* clock = nullptr;
    std::unique_ptr<SolverInterface> solver;
};

Runtime make_runtime(const CliOptions& opts) {
    Runtime rt;
    if (!opts.fake_solver_script.empty()) {
        rt.virtual_clock = std::make_shared<VirtualClock>();
        rt.clock = rt.virtual_clock.get();
        rt.solver = std::make_unique<FakeSolver>(
            FakeSolverScript::load_file(opts.fake_solver_script), rt.virtual_clock);
    } else {
        rt.wall_clock = std::make_unique<WallClock>();
        rt.clock = rt.wall_clock.get();
        SolverConfig config;
        config.executable = opts.solver_exe;
        config.backend = opts.backend;
        rt.solver = std::make_unique<MiniZincSolver>(config);
    }
    return rt;
}

GenerationConfig make_generation_config(const CliOptions& opts) {
    GenerationConfig cfg;
    cfg.mode = opts.mode == "adaptive" ? GenerationMode::Adaptive : GenerationMode::Static;
    if (opts.mode != "adaptive" && opts.mode != "static") {
        throw ConfigError("mode must be 'static' or 'adaptive'");
    }
    auto variant = prompt_variant_from_string(opts.prompt);
    if (!variant) throw ConfigError("prompt must be one of p1..p4");
    cfg.prompt_variant = *variant;
    cfg.n_per_query = opts.n;
    cfg.k = opts.k;
    cfg.budget_seconds = opts.budget;
    cfg.t_train_cap = opts.ttrain_cap;
    cfg.t_train_floor = opts.ttrain_floor;
    cfg.n_train = opts.ntrain;
    cfg.provider = opts.provider;
    cfg.max_parallel_solves = opts.max_parallel;
    cfg.validate();
    return cfg;
}

LlmClient make_client(const CliOptions& opts, const RunDirectory& run) {
    if (opts.provider == "openai") {
        ProviderConfig config = ProviderConfig::openai_default();
        config.record_dir = run.responses_dir();
        return LlmClient(config);
    }
    if (opts.provider == "anthropic") {
        ProviderConfig config = ProviderConfig::anthropic_default();
        config.record_dir = run.responses_dir();
        return LlmClient(config);
    }
    if (opts.provider == "fixture") {
        if (opts.fixture_dir.empty()) {
            throw ConfigError("--fixture <dir> is required with --provider fixture");
        }
        return LlmClient(ProviderConfig::fixture(opts.fixture_dir));
    }
    throw ConfigError("provider must be openai, anthropic, or fixture");
}

std::map<std::string, std::string> config_echo(const CliOptions& opts,
                                               const std::string& command) {
    std::map<std::string, std::string> echo;
    auto num = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string(buf);
    };
    echo["command"] = command;
    echo["mode"] = opts.mode;
    echo["prompt"] = opts.prompt;
    echo["provider"] = opts.provider;
    echo["budget_seconds"] = num(opts.budget);
    echo["n_per_query"] = std::to_string(opts.n);
    echo["k"] = std::to_string(opts.k);
    echo["ttrain_cap"] = num(opts.ttrain_cap);
    echo["ttrain_floor"] = num(opts.ttrain_floor);
    echo["ntrain"] = std::to_string(opts.ntrain);
    echo["threshold_percent"] = num(opts.threshold);
    echo["max_parallel"] = std::to_string(opts.max_parallel);
    echo["seed"] = std::to_string(opts.seed);
    echo["solver"] =
        opts.fake_solver_script.empty() ? opts.solver_exe + "/" + opts.backend : "fake";
    return echo;
}

// Configuration precedence: CLI flags > environment variables > config file
// > defaults. CLI11 only writes into fields it actually parsed, so applying
// the file and the environment before the parse yields exactly that order.
struct SettingBinding {
    const char* key;  // config-file key, same spelling as the long flag
    const char* env;
    std::function<void(const std::string&)> apply;
};

std::vector<SettingBinding> setting_bindings(CliOptions& o) {
    auto set_string = [](std::string& target) {
        return [&target](const std::string& v) { target = v; };
    };
    auto set_double = [](double& target, const char* key) {
        return [&target, key](const std::string& v) {
            try {
                target = std::stod(v);
            } catch (const std::exception&) {
                throw ConfigError(std::string("bad number for ") + key + ": " + v);
            }
        };
    };
    auto set_int = [](int& target, const char* key) {
        return [&target, key](const std::string& v) {
            try {
                target = std::stoi(v);
            } catch (const std::exception&) {
                throw ConfigError(std::string("bad integer for ") + key + ": " + v);
            }
        };
    };
    auto set_u64 = [](std::uint64_t& target, const char* key) {
        return [&target, key](const std::string& v) {
            try {
                target = std::stoull(v);
            } catch (const std::exception&) {
                throw ConfigError(std::string("bad integer for ") + key + ": " + v);
            }
        };
    };
    return {
        {"mode", "STREAMLLM_MODE", set_string(o.mode)},
        {"prompt", "STREAMLLM_PROMPT", set_string(o.prompt)},
        {"provider", "STREAMLLM_PROVIDER", set_string(o.provider)},
        {"fixture", "STREAMLLM_FIXTURE", set_string(o.fixture_dir)},
        {"budget", "STREAMLLM_BUDGET", set_double(o.budget, "budget")},
        {"n", "STREAMLLM_N", set_int(o.n, "n")},
        {"k", "STREAMLLM_K", set_int(o.k, "k")},
        {"ttrain-cap", "STREAMLLM_TTRAIN_CAP", set_double(o.ttrain_cap, "ttrain-cap")},
        {"ttrain-floor", "STREAMLLM_TTRAIN_FLOOR", set_double(o.ttrain_floor, "ttrain-floor")},
        {"ntrain", "STREAMLLM_NTRAIN", set_int(o.ntrain, "ntrain")},
        {"threshold", "STREAMLLM_THRESHOLD", set_double(o.threshold, "threshold")},
        {"max-parallel", "STREAMLLM_MAX_PARALLEL", set_int(o.max_parallel, "max-parallel")},
        {"seed", "STREAMLLM_SEED", set_u64(o.seed, "seed")},
        {"limit", "STREAMLLM_LIMIT", set_double(o.limit, "limit")},
        {"solver-exe", "STREAMLLM_SOLVER_EXE", set_string(o.solver_exe)},
        {"backend", "STREAMLLM_BACKEND", set_string(o.backend)},
        {"fake-solver", "STREAMLLM_FAKE_SOLVER", set_string(o.fake_solver_script)},
    };
}

void apply_layered_config(CliOptions& opts, int argc, char** argv) {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            config_path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            config_path = arg.substr(9);
        }
    }
    auto bindings = setting_bindings(opts);

    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config file: " + config_path);
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            auto trim = [](std::string s) {
                const char* ws = " \t\r";
                auto b = s.find_first_not_of(ws);
                if (b == std::string::npos) return std::string();
                return s.substr(b, s.find_last_not_of(ws) - b + 1);
            };
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(config_path + ":" + std::to_string(line_no) +
                                  ": expected key = value");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            bool known = false;
            for (const auto& binding : bindings) {
                if (key == binding.key) {
                    binding.apply(value);
                    known = true;
                    break;
                }
            }
            if (!known) {
                throw ConfigError(config_path + ":" + std::to_string(line_no) +
                                  ": unknown setting '" + key + "'");
            }
        }
    }

    for (const auto& binding : bindings) {
        const char* value = std::getenv(binding.env);
        if (value != nullptr && *value != '\0') binding.apply(value);
    }
}

void merge_config(RunDirectory& run, const std::map<std::string, std::string>& update) {
    std::map<std::string, std::string> merged;
    if (run.has("config.json")) merged = run.load_config();
    for (const auto& [key, value] : update) merged[key] = value;
    run.save_config(merged);
}

void echo_config_to_log(RunDirectory& run, Clock& clock,
                        const std::map<std::string, std::string>& echo) {
    auto logger = run.make_logger(clock);
    LogFields fields(echo.begin(), echo.end());
    logger->log("config", fields);
}

int cmd_grade(const CliOptions& opts) {
    ConstraintModel model = load_model_file(opts.model_path);
    auto instances = load_instances_from_dir(opts.data_dir, InstanceRole::Training);
    RunDirectory run = RunDirectory::create(opts.run_dir);
    Runtime rt = make_runtime(opts);

    auto echo = config_echo(opts, "grade");
    run.save_config(echo);
    run.save_model(model);
    echo_config_to_log(run, *rt.clock, echo);

    GenerationConfig cfg = make_generation_config(opts);
    GradedTrainingSet graded =
        grade_baselines(*rt.solver, model, instances, cfg, opts.seed);
    run.save_manifest(graded);

    std::cout << "graded " << instances.size() << " instances: kept " << graded.kept.size()
              << ", excluded " << graded.excluded.size()
              << (graded.subsampled ? " (subsampled, seed " + std::to_string(opts.seed) + ")"
                                    : "")
              << "\n";
    for (const auto& inst : graded.kept) {
        std::printf("  kept %-20s t_base=%.3fs\n", inst.id.c_str(), *inst.baseline_seconds);
    }
    for (const auto& e : graded.excluded) {
        std::printf("  excluded %-16s %s\n", e.id.c_str(), e.reason.c_str());
    }
    return 0;
}

int cmd_generate(const CliOptions& opts) {
    RunDirectory run = RunDirectory::open(opts.run_dir);
    ConstraintModel model = run.load_model();
    GradedTrainingSet graded = run.load_manifest();
    Runtime rt = make_runtime(opts);

    auto echo = config_echo(opts, "generate");
    merge_config(run, echo);
    echo_config_to_log(run, *rt.clock, echo);

    GenerationConfig cfg = make_generation_config(opts);
    LlmClient client = make_client(opts, run);
    PromptTemplate tmpl = PromptTemplate::for_variant(cfg.prompt_variant);
    auto logger = run.make_logger(*rt.clock);

    std::vector<std::string> instance_ids;
    std::map<std::string, double> baselines;
    for (const auto& inst : graded.kept) {
        instance_ids.push_back(inst.id);
        baselines[inst.id] = *inst.baseline_seconds;
    }
    EvalMatrix matrix(instance_ids, baselines);

    CandidatePool pool;
    try {
        pool = run_generation({*rt.solver, client, *rt.clock, logger.get()}, model, graded, cfg,
                              tmpl, matrix);
    } catch (const GenerationError& e) {
        run.save_matrix(matrix);
        run.save_pool(e.partial_pool());
        std::cerr << "error: " << e.what() << " (partial pool saved)\n";
        return 1;
    }
    run.save_matrix(matrix);
    run.save_pool(pool);

    std::vector<std::string> surviving_ids;
    for (const auto& s : pool.accepted) surviving_ids.push_back(s.id);
    Portfolio portfolio;
    try {
        portfolio = select_k_best(matrix, surviving_ids, cfg.k);
    } catch (const SelectionError& e) {
        std::cerr << "error: " << e.what() << " (race will run the original model only)\n";
        return 1;
    }
    if (static_cast<int>(portfolio.members.size()) < cfg.k) {
        std::cerr << "warning: only " << portfolio.members.size() << " survivors for k="
                  << cfg.k << "\n";
    }

    std::vector<Streamliner> members;
    for (const auto& id : portfolio.members) {
        for (const auto& s : pool.accepted) {
            if (s.id == id) members.push_back(s);
        }
    }
    run.save_portfolio(portfolio, members, pool.elapsed_seconds);

    std::printf("pool: %zu accepted, %zu discarded over %d iterations (%.1fs)\n",
                pool.accepted.size(), pool.discarded.size(), pool.iteration,
                pool.elapsed_seconds);
    std::printf("portfolio (%s, score %.3fs vs baseline %.3fs):\n",
                portfolio.selection_meta.c_str(), portfolio.score_seconds,
                matrix.total_baseline());
    for (std::size_t i = 0; i < members.size(); ++i) {
        std::printf("  streamliner_%zu: %s\n", i + 1, members[i].constraint_text.c_str());
    }
    return 0;
}

int cmd_race(const CliOptions& opts) {
    RunDirectory run = RunDirectory::open(opts.run_dir);
    ConstraintModel model = run.load_model();
    double generation_seconds = 0.0;
    std::vector<Streamliner> members = run.load_portfolio(&generation_seconds);
    auto instances = load_instances_from_dir(opts.data_dir, InstanceRole::Test);
    if (instances.empty()) throw ConfigError("no .dzn instances in " + opts.data_dir);

    std::map<std::string, double> baselines;
    if (!opts.baselines_file.empty()) {
        auto doc = nlohmann::json::parse(slurp_file(opts.baselines_file));
        for (const auto& [id, seconds] : doc.items()) baselines[id] = seconds.get<double>();
    }

    Runtime rt = make_runtime(opts);
    auto logger = run.make_logger(*rt.clock);

    for (const auto& instance : instances) {
        RaceResult result =
            race(*rt.solver, model, members, instance, opts.limit, *rt.clock, logger.get());
        result.generation_seconds = generation_seconds;
        if (auto it = baselines.find(instance.id); it != baselines.end()) {
            result.baseline_seconds = it->second;
        }
        run.append_race(result);
        std::printf("%-20s %-9s winner=%-10s %.3fs\n", instance.id.c_str(),
                    to_string(result.status), result.winner.value_or("-").c_str(),
                    result.winning_seconds);
    }
    return 0;
}

int cmd_report(const CliOptions& opts) {
    std::vector<ReportRecord> records;
    int skipped = 0;
    for (const auto& dir : opts.run_dirs) {
        RunDirectory run = RunDirectory::open(dir);
        auto config = run.load_config();
        ConstraintModel model = run.load_model();
        const std::string configuration = config["mode"] + "-" + config["provider"] + "-" +
                                          (config.count("prompt") ? config["prompt"] : "p1");
        for (const auto& race_result : run.load_races()) {
            double t_orig = 0.0;
            if (race_result.baseline_seconds) {
                t_orig = *race_result.baseline_seconds;
            } else {
                for (const auto& lane : race_result.lanes) {
                    if (lane.lane_id == kOriginalLane &&
                        lane.disposition == LaneDisposition::Sat) {
                        t_orig = lane.seconds;
                    }
                }
            }
            if (t_orig <= 0.0) {
                ++skipped;  // no unstreamlined reference time for this instance
                continue;
            }
            ReportRecord record;
            record.problem = model.name;
            record.configuration = configuration;
            record.run_label = fs::path(dir).filename().string();
            record.instance_id = race_result.instance_id;
            record.t_orig = t_orig;
            record.t_stream = race_result.winning_seconds;
            record.t_generation = race_result.generation_seconds;
            records.push_back(std::move(record));
        }
    }

    RunReport report = aggregate(records, opts.threshold);
    const std::string out_dir = opts.out.empty() ? opts.run_dirs.front() : opts.out;
    RunDirectory out = RunDirectory::open(out_dir);
    out.save_report(report);
    std::cout << render_report_table(report);
    if (skipped > 0) {
        std::cout << "\n(" << skipped << " raced instances skipped: no baseline time)\n";
    }
    return 0;
}

int cmd_calibrate(const CliOptions& opts) {
    ConstraintModel model = load_model_file(opts.model_path);
    auto instances = load_instances_from_dir(opts.data_dir, InstanceRole::Test);
    Runtime rt = make_runtime(opts);

    CalibrationResult result = calibrate_threshold(*rt.solver, model, instances, opts.copies,
                                                   opts.limit, opts.max_parallel);
    std::printf("measured solver noise: %.2f%% mean reduction across %zu instances\n",
                result.threshold_percent, result.per_instance.size());
    for (const auto& [id, percent] : result.per_instance) {
        std::printf("  %-20s %.2f%%\n", id.c_str(), percent);
    }
    for (const auto& id : result.skipped) {
        std::printf("  %-20s skipped (unsat or error)\n", id.c_str());
    }
    if (!opts.out.empty()) {
        nlohmann::ordered_json j;
        j["threshold_percent"] = result.threshold_percent;
        j["copies"] = opts.copies;
        nlohmann::ordered_json per = nlohmann::ordered_json::object();
        for (const auto& [id, percent] : result.per_instance) per[id] = percent;
        j["per_instance"] = per;
        j["skipped"] = result.skipped;
        std::ofstream out(opts.out, std::ios::binary);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int cmd_obfuscate(const CliOptions& opts) {
    ConstraintModel model = load_model_file(opts.model_path);
    std::vector<DataInstance> data;
    for (const auto& path : opts.data_files) {
        DataInstance inst;
        inst.id = fs::path(path).stem().string();
        inst.data_text = slurp_file(path);
        data.push_back(std::move(inst));
    }

    ObfuscationResult result =
        obfuscate(model, opts.seed, data, /*strip_comments=*/!opts.keep_comments);

    const fs::path out_dir = opts.out.empty() ? "." : opts.out;
    fs::create_directories(out_dir);
    const std::string model_out = (out_dir / (model.name + "_obf.mzn")).string();
    {
        std::ofstream out(model_out, std::ios::binary);
        out << result.model.source_text;
    }
    for (const auto& inst : result.data) {
        std::ofstream out(out_dir / (inst.id + "_obf.dzn"), std::ios::binary);
        out << inst.data_text;
    }
    {
        std::ofstream out(out_dir / (model.name + "_rename_map.txt"), std::ios::binary);
        out << result.map.to_text();
    }
    std::printf("renamed %zu identifiers -> %s\n", result.map.pairs.size(), model_out.c_str());
    return 0;
}

void add_config_option(CLI::App* cmd, std::string& sink) {
    cmd->add_option("--config", sink, "key = value configuration file (applied before env and flags)");
}

void add_solver_options(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--solver-exe", opts.solver_exe, "MiniZinc executable");
    cmd->add_option("--backend", opts.backend, "MiniZinc backend solver id");
    cmd->add_option("--fake-solver", opts.fake_solver_script,
                    "JSON script; use a deterministic fake solver under virtual time");
    cmd->add_option("--max-parallel", opts.max_parallel, "max concurrent solver processes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"realtime streamliner generation for MiniZinc decision models"};
    app.require_subcommand(1);

    CliOptions opts;
    std::string config_sink;  // parsed by apply_layered_config before CLI11 runs
    try {
        apply_layered_config(opts, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    auto* grade = app.add_subcommand("grade", "grade training baselines for a model");
    grade->add_option("--model", opts.model_path, "MiniZinc model file")->required();
    grade->add_option("--data", opts.data_dir, "directory of training .dzn files")->required();
    grade->add_option("--out", opts.run_dir, "run directory to create")->required();
    grade->add_option("--ttrain-cap", opts.ttrain_cap, "training baseline cap, seconds");
    grade->add_option("--ttrain-floor", opts.ttrain_floor, "training baseline floor, seconds");
    grade->add_option("--ntrain", opts.ntrain, "training instances to keep");
    grade->add_option("--seed", opts.seed, "subsampling seed");
    add_solver_options(grade, opts);

    auto* generate = app.add_subcommand("generate", "generate, vet, and select streamliners");
    generate->add_option("--run", opts.run_dir, "run directory from grade")->required();
    generate->add_option("--mode", opts.mode, "static or adaptive");
    generate->add_option("--prompt", opts.prompt, "prompt variant p1..p4");
    generate->add_option("--provider", opts.provider, "openai, anthropic, or fixture");
    generate->add_option("--fixture", opts.fixture_dir, "fixture directory of responses");
    generate->add_option("--budget", opts.budget, "generation budget, seconds");
    generate->add_option("--n", opts.n, "streamliners requested per query");
    generate->add_option("--k", opts.k, "portfolio size");
    generate->add_option("--seed", opts.seed, "run seed");
    add_solver_options(generate, opts);

    auto* race_cmd = app.add_subcommand("race", "race the portfolio against the original");
    race_cmd->add_option("--run", opts.run_dir, "run directory with a portfolio")->required();
    race_cmd->add_option("--data", opts.data_dir, "directory of test .dzn files")->required();
    race_cmd->add_option("--limit", opts.limit, "overall race limit per instance, seconds");
    race_cmd->add_option("--baselines", opts.baselines_file,
                         "JSON {instance id: unstreamlined seconds} for reporting");
    add_solver_options(race_cmd, opts);

    auto* report = app.add_subcommand("report", "aggregate race results into a report");
    report->add_option("runs", opts.run_dirs, "run directories")->required();
    report->add_option("--out", opts.out, "directory for report files (default: first run)");
    report->add_option("--threshold", opts.threshold, "significance threshold, percent");

    auto* calibrate = app.add_subcommand("calibrate", "measure the solver noise threshold");
    calibrate->add_option("--model", opts.model_path, "MiniZinc model file")->required();
    calibrate->add_option("--data", opts.data_dir, "directory of .dzn files")->required();
    calibrate->add_option("--copies", opts.copies, "identical copies per instance");
    calibrate->add_option("--limit", opts.limit, "per-solve limit, seconds");
    calibrate->add_option("--out", opts.out, "write calibration JSON here");
    add_solver_options(calibrate, opts);

    auto* obfuscate_cmd =
        app.add_subcommand("obfuscate", "rename identifiers to meaningless names");
    obfuscate_cmd->add_option("--model", opts.model_path, "MiniZinc model file")->required();
    obfuscate_cmd->add_option("--data", opts.data_files, "companion data files");
    obfuscate_cmd->add_option("--seed", opts.seed, "name assignment seed");
    obfuscate_cmd->add_option("--out", opts.out, "output directory");
    obfuscate_cmd->add_flag("--keep-comments", opts.keep_comments, "retain comments");

    for (auto* cmd : {grade, generate, race_cmd, report, calibrate, obfuscate_cmd}) {
        add_config_option(cmd, config_sink);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (grade->parsed()) return cmd_grade(opts);
        if (generate->parsed()) return cmd_generate(opts);
        if (race_cmd->parsed()) return cmd_race(opts);
        if (report->parsed()) return cmd_report(opts);
        if (calibrate->parsed()) return cmd_calibrate(opts);
        if (obfuscate_cmd->parsed()) return cmd_obfuscate(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
