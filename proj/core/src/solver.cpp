#include "streamllm/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamllm/errors.hpp"

namespace fs = std::filesystem;

namespace streamllm {

namespace {

constexpr const char* kSatSentinel = "----------";
constexpr const char* kUnsatSentinel = "=====UNSATISFIABLE=====";
constexpr const char* kUnknownSentinel = "=====UNKNOWN=====";

bool has_sentinel_line(const std::string& text, const std::string& sentinel) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == sentinel) return true;
    }
    return false;
}

std::string stderr_excerpt(const std::string& text) {
    constexpr std::size_t kMax = 500;
    if (text.size() <= kMax) return text;
    return text.substr(0, kMax) + "...";
}

std::string sanitize_filename(const std::string& name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
            out.push_back(c);
        } else {
            out.push_back('_');
        }
    }
    return out.empty() ? "model" : out;
}

void write_file_or_throw(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw EnvironmentError("cannot write " + path);
    out << content;
}

}  // namespace

std::string model_fingerprint(const ConstraintModel& model) {
    // Normalize: strip per-line trailing whitespace, drop trailing blank lines.
    std::vector<std::string> lines;
    std::istringstream in(model.source_text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.pop_back();
        }
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (const auto& l : lines) {
        for (char c : l) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

MiniZincSolver::MiniZincSolver(SolverConfig config) : config_(std::move(config)) {
    if (config_.executable.empty()) throw EnvironmentError("solver executable not set");
    std::string tmpl = (fs::temp_directory_path() / "streamllm-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (mkdtemp(buf.data()) == nullptr) {
        throw EnvironmentError("cannot create solver temp directory");
    }
    temp_dir_ = buf.data();
}

MiniZincSolver::~MiniZincSolver() {
    std::error_code ec;
    fs::remove_all(temp_dir_, ec);
}

SolveOutcome MiniZincSolver::solve(const ConstraintModel& model,
                                   const DataInstance& instance,
                                   double limit_seconds,
                                   const CancelToken* cancel) {
    int serial;
    {
        std::lock_guard<std::mutex> lock(file_counter_mutex_);
        serial = file_counter_++;
    }
    const std::string stem =
        temp_dir_ + "/" + sanitize_filename(model.name) + "-" + std::to_string(serial);
    const std::string model_path = stem + ".mzn";
    write_file_or_throw(model_path, model.source_text);

    std::vector<std::string> argv = {config_.executable, "--solver", config_.backend,
                                     "--time-limit",
                                     std::to_string(static_cast<long long>(limit_seconds * 1000))};
    argv.insert(argv.end(), config_.extra_args.begin(), config_.extra_args.end());
    argv.push_back(model_path);
    if (!instance.data_text.empty()) {
        const std::string data_path = stem + ".dzn";
        write_file_or_throw(data_path, instance.data_text);
        argv.push_back(data_path);
    }

    ProcessResult proc = run_process(argv, limit_seconds + kTimeoutSlackSeconds, cancel);

    SolveOutcome outcome;
    outcome.wall_seconds = proc.wall_seconds;
    if (has_sentinel_line(proc.stdout_text, kUnsatSentinel)) {
        outcome.status = SolveStatus::Unsat;
        outcome.detail = kUnsatSentinel;
    } else if (has_sentinel_line(proc.stdout_text, kSatSentinel)) {
        outcome.status = SolveStatus::Sat;
        outcome.detail = kSatSentinel;
    } else if (proc.cancelled) {
        outcome.status = SolveStatus::Timeout;
        outcome.detail = "cancelled";
    } else if (proc.killed) {
        outcome.status = SolveStatus::Timeout;
        outcome.detail = "harness kill at limit";
    } else if (has_sentinel_line(proc.stdout_text, kUnknownSentinel)) {
        outcome.status = SolveStatus::Timeout;
        outcome.detail = kUnknownSentinel;
    } else {
        outcome.status = SolveStatus::Error;
        outcome.detail = !proc.stderr_text.empty()
                             ? stderr_excerpt(proc.stderr_text)
                             : "exit " + std::to_string(proc.exit_code) + " without sentinel";
    }
    return outcome;
}

void FakeSolverScript::script(const std::string& fingerprint, const std::string& instance_id,
                              SolveOutcome outcome) {
    script_sequence(fingerprint, instance_id, {std::move(outcome)});
}

void FakeSolverScript::script_sequence(const std::string& fingerprint,
                                       const std::string& instance_id,
                                       std::vector<SolveOutcome> outcomes) {
    by_key_["fp:" + fingerprint + "|" + instance_id] = SeqEntry{Entry{std::move(outcomes)}, 0};
}

void FakeSolverScript::script_name(const std::string& model_name, const std::string& instance_id,
                                   SolveOutcome outcome) {
    by_key_["name:" + model_name + "|" + instance_id] = SeqEntry{Entry{{std::move(outcome)}}, 0};
}

void FakeSolverScript::script_contains(const std::string& source_substring,
                                       const std::string& instance_id, SolveOutcome outcome) {
    const std::string key =
        "contains#" + std::to_string(contains_matchers_.size()) + "|" + instance_id;
    contains_matchers_.emplace_back(source_substring, key);
    aux_entries_[key] = SeqEntry{Entry{{std::move(outcome)}}, 0};
}

const FakeSolverScript::Entry* FakeSolverScript::find(const ConstraintModel& model,
                                                      const std::string& instance_id,
                                                      std::string* key_out) const {
    const std::string fp_key = "fp:" + model_fingerprint(model) + "|" + instance_id;
    if (auto it = by_key_.find(fp_key); it != by_key_.end()) {
        *key_out = fp_key;
        return &it->second.entry;
    }
    const std::string name_key = "name:" + model.name + "|" + instance_id;
    if (auto it = by_key_.find(name_key); it != by_key_.end()) {
        *key_out = name_key;
        return &it->second.entry;
    }
    const std::string inst_suffix = "|" + instance_id;
    for (const auto& [substring, key] : contains_matchers_) {
        if (key.size() >= inst_suffix.size() &&
            key.compare(key.size() - inst_suffix.size(), inst_suffix.size(), inst_suffix) == 0 &&
            model.source_text.find(substring) != std::string::npos) {
            auto it = aux_entries_.find(key);
            if (it != aux_entries_.end()) {
                *key_out = key;
                return &it->second.entry;
            }
        }
    }
    return nullptr;
}

SolveOutcome FakeSolverScript::next(const ConstraintModel& model, const std::string& instance_id) {
    std::string key;
    if (find(model, instance_id, &key) == nullptr) return default_outcome_;
    SeqEntry& seq = key.rfind("contains#", 0) == 0 ? aux_entries_[key] : by_key_[key];
    const auto& outcomes = seq.entry.outcomes;
    SolveOutcome out = outcomes[std::min(seq.cursor, outcomes.size() - 1)];
    if (seq.cursor + 1 < outcomes.size()) ++seq.cursor;
    return out;
}

SolveOutcome FakeSolverScript::peek(const ConstraintModel& model,
                                    const std::string& instance_id) const {
    std::string key;
    const Entry* entry = find(model, instance_id, &key);
    if (entry == nullptr) return default_outcome_;
    const auto& seq = key.rfind("contains#", 0) == 0 ? aux_entries_.at(key) : by_key_.at(key);
    return entry->outcomes[std::min(seq.cursor, entry->outcomes.size() - 1)];
}

FakeSolverScript FakeSolverScript::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open fake solver script: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad fake solver script " + path + ": " + e.what());
    }

    auto parse_outcome = [&path](const nlohmann::json& j) {
        SolveOutcome o;
        auto status = solve_status_from_string(j.at("status").get<std::string>());
        if (!status) throw ConfigError("bad status in fake solver script " + path);
        o.status = *status;
        o.wall_seconds = j.at("seconds").get<double>();
        if (o.wall_seconds < 0) throw ConfigError("negative seconds in fake solver script " + path);
        o.detail = j.value("detail", std::string("scripted"));
        return o;
    };

    FakeSolverScript script;
    if (doc.contains("default")) script.set_default(parse_outcome(doc["default"]));
    for (const auto& e : doc.value("entries", nlohmann::json::array())) {
        std::string match = e.at("match").get<std::string>();
        std::string instance = e.at("instance").get<std::string>();
        std::vector<SolveOutcome> outcomes;
        if (e.contains("outcomes")) {
            for (const auto& o : e["outcomes"]) outcomes.push_back(parse_outcome(o));
        } else {
            outcomes.push_back(parse_outcome(e));
        }
        if (outcomes.empty()) throw ConfigError("empty outcomes list in " + path);
        if (match.rfind("fp:", 0) == 0) {
            script.script_sequence(match.substr(3), instance, std::move(outcomes));
        } else if (match.rfind("contains:", 0) == 0) {
            const std::string key =
                "contains#" + std::to_string(script.contains_matchers_.size()) + "|" + instance;
            script.contains_matchers_.emplace_back(match.substr(9), key);
            script.aux_entries_[key] = SeqEntry{Entry{std::move(outcomes)}, 0};
        } else {
            if (match.rfind("name:", 0) == 0) match = match.substr(5);
            script.by_key_["name:" + match + "|" + instance] =
                SeqEntry{Entry{std::move(outcomes)}, 0};
        }
    }
    return script;
}

SolveOutcome FakeSolver::cap_to_limit(SolveOutcome scripted, double limit_seconds) {
    if (scripted.wall_seconds <= limit_seconds) return scripted;
    return SolveOutcome{SolveStatus::Timeout, limit_seconds, "scripted time exceeds limit"};
}

SolveOutcome FakeSolver::solve(const ConstraintModel& model, const DataInstance& instance,
                               double limit_seconds, const CancelToken* cancel) {
    (void)cancel;  // virtual time has no in-flight solves to interrupt
    SolveOutcome out;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        calls_.push_back({model.name, instance.id, limit_seconds});
        out = cap_to_limit(script_.next(model, instance.id), limit_seconds);
    }
    clock_->advance(out.wall_seconds);
    return out;
}

SolveOutcome FakeSolver::peek(const ConstraintModel& model, const DataInstance& instance,
                              double limit_seconds) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cap_to_limit(script_.peek(model, instance.id), limit_seconds);
}

std::vector<FakeSolver::CallRecord> FakeSolver::call_log() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

}  // namespace streamllm
