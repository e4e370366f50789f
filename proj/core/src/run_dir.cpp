#include "streamllm/run_dir.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "streamllm/errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace streamllm {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

ordered_json parse_json(const std::string& path) {
    try {
        return ordered_json::parse(slurp(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
}

ordered_json streamliner_to_json(const Streamliner& s) {
    return {{"id", s.id},
            {"text", s.constraint_text},
            {"origin",
             {{"provider", s.origin.provider},
              {"variant", to_string(s.origin.variant)},
              {"iteration", s.origin.iteration},
              {"slot", s.origin.slot_key}}}};
}

Streamliner streamliner_from_json(const ordered_json& j) {
    Streamliner s;
    s.id = j.at("id").get<std::string>();
    s.constraint_text = j.at("text").get<std::string>();
    const auto& origin = j.at("origin");
    s.origin.provider = origin.value("provider", "");
    if (auto v = prompt_variant_from_string(origin.value("variant", "p1"))) {
        s.origin.variant = *v;
    }
    s.origin.iteration = origin.value("iteration", 0);
    s.origin.slot_key = origin.value("slot", "");
    return s;
}

// Log lines keep a fixed-width virtual timestamp so replayed runs diff clean.
class JsonlLogger final : public RunLogger {
public:
    JsonlLogger(std::string path, Clock& clock) : path_(std::move(path)), clock_(clock) {}

    void log(const std::string& event, const LogFields& fields) override {
        ordered_json record;
        char t[32];
        std::snprintf(t, sizeof(t), "%.3f", clock_.now());
        record["t"] = t;
        record["event"] = event;
        for (const auto& [key, value] : fields) record[key] = value;
        std::ofstream out(path_, std::ios::app | std::ios::binary);
        out << record.dump() << "\n";
    }

private:
    std::string path_;
    Clock& clock_;
};

}  // namespace

std::vector<DataInstance> load_instances_from_dir(const std::string& dir, InstanceRole role) {
    if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".dzn") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<DataInstance> instances;
    for (const auto& f : files) {
        DataInstance inst;
        inst.id = f.stem().string();
        inst.data_text = slurp(f.string());
        inst.role = role;
        instances.push_back(std::move(inst));
    }
    return instances;
}

RunDirectory RunDirectory::create(const std::string& path) {
    fs::create_directories(path);
    fs::create_directories(fs::path(path) / "instances");
    fs::create_directories(fs::path(path) / "responses");
    return RunDirectory(path);
}

RunDirectory RunDirectory::open(const std::string& path) {
    if (!fs::is_directory(path)) throw ConfigError("run directory not found: " + path);
    return RunDirectory(path);
}

std::string RunDirectory::file(const std::string& name) const {
    return (fs::path(path_) / name).string();
}

bool RunDirectory::has(const std::string& name) const { return fs::exists(file(name)); }

void RunDirectory::save_config(const std::map<std::string, std::string>& effective) {
    ordered_json j;
    for (const auto& [key, value] : effective) j[key] = value;
    spit(file("config.json"), j.dump(2) + "\n");
}

std::map<std::string, std::string> RunDirectory::load_config() const {
    const ordered_json j = parse_json(file("config.json"));
    std::map<std::string, std::string> out;
    for (const auto& [key, value] : j.items()) {
        out[key] = value.get<std::string>();
    }
    return out;
}

void RunDirectory::save_model(const ConstraintModel& model) {
    spit(file("model.mzn"), model.source_text);
    ordered_json j{{"name", model.name}, {"origin_path", model.origin_path}};
    spit(file("model_meta.json"), j.dump(2) + "\n");
}

ConstraintModel RunDirectory::load_model() const {
    ConstraintModel model;
    model.source_text = slurp(file("model.mzn"));
    if (has("model_meta.json")) {
        auto j = parse_json(file("model_meta.json"));
        model.name = j.value("name", "model");
        model.origin_path = j.value("origin_path", "inline");
    } else {
        model.name = "model";
        model.origin_path = file("model.mzn");
    }
    return model;
}

void RunDirectory::save_manifest(const GradedTrainingSet& graded) {
    ordered_json kept = ordered_json::array();
    for (const auto& inst : graded.kept) {
        const std::string rel = "instances/" + inst.id + ".dzn";
        spit(file(rel), inst.data_text);
        kept.push_back({{"id", inst.id},
                        {"file", rel},
                        {"baseline_seconds", *inst.baseline_seconds}});
    }
    ordered_json excluded = ordered_json::array();
    for (const auto& e : graded.excluded) {
        excluded.push_back({{"id", e.id}, {"reason", e.reason}, {"seconds", e.seconds}});
    }
    ordered_json j{{"seed", graded.seed},
                   {"subsampled", graded.subsampled},
                   {"kept", kept},
                   {"excluded", excluded}};
    spit(file("manifest.json"), j.dump(2) + "\n");
}

GradedTrainingSet RunDirectory::load_manifest() const {
    auto j = parse_json(file("manifest.json"));
    GradedTrainingSet graded;
    graded.seed = j.value("seed", 0ull);
    graded.subsampled = j.value("subsampled", false);
    for (const auto& k : j.at("kept")) {
        DataInstance inst;
        inst.id = k.at("id").get<std::string>();
        inst.data_text = slurp(file(k.at("file").get<std::string>()));
        inst.role = InstanceRole::Training;
        inst.baseline_seconds = k.at("baseline_seconds").get<double>();
        graded.kept.push_back(std::move(inst));
    }
    for (const auto& e : j.value("excluded", ordered_json::array())) {
        graded.excluded.push_back({e.at("id").get<std::string>(),
                                   e.at("reason").get<std::string>(),
                                   e.value("seconds", 0.0)});
    }
    return graded;
}

void RunDirectory::save_matrix(const EvalMatrix& matrix) {
    std::ostringstream out;
    ordered_json baselines;
    for (const auto& id : matrix.instance_ids()) baselines[id] = matrix.baseline(id);
    ordered_json header{{"instances", matrix.instance_ids()}, {"baselines", baselines}};
    out << header.dump() << "\n";
    for (const auto& record : matrix.to_records()) {
        ordered_json cell{{"streamliner", record.streamliner_id},
                          {"instance", record.instance_id},
                          {"status", to_string(record.outcome.status)},
                          {"wall_seconds", record.outcome.wall_seconds},
                          {"detail", record.outcome.detail}};
        out << cell.dump() << "\n";
    }
    spit(file("eval_matrix.jsonl"), out.str());
}

EvalMatrix RunDirectory::load_matrix() const {
    std::istringstream in(slurp(file("eval_matrix.jsonl")));
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty eval_matrix.jsonl");
    ordered_json header = ordered_json::parse(line);
    std::vector<std::string> instance_ids =
        header.at("instances").get<std::vector<std::string>>();
    std::map<std::string, double> baselines;
    for (const auto& [id, value] : header.at("baselines").items()) {
        baselines[id] = value.get<double>();
    }
    std::vector<CellRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        CellRecord record;
        record.streamliner_id = j.at("streamliner").get<std::string>();
        record.instance_id = j.at("instance").get<std::string>();
        auto status = solve_status_from_string(j.at("status").get<std::string>());
        if (!status) throw ConfigError("bad status in eval_matrix.jsonl");
        record.outcome.status = *status;
        record.outcome.wall_seconds = j.at("wall_seconds").get<double>();
        record.outcome.detail = j.value("detail", "");
        records.push_back(std::move(record));
    }
    return EvalMatrix::from_records(instance_ids, baselines, records);
}

void RunDirectory::save_pool(const CandidatePool& pool) {
    ordered_json accepted = ordered_json::array();
    for (const auto& s : pool.accepted) accepted.push_back(streamliner_to_json(s));
    ordered_json discarded = ordered_json::array();
    for (const auto& [s, reason] : pool.discarded) {
        ordered_json j = streamliner_to_json(s);
        j["reason"] = reason;
        discarded.push_back(std::move(j));
    }
    ordered_json j{{"iterations", pool.iteration},
                   {"elapsed_seconds", pool.elapsed_seconds},
                   {"accepted", accepted},
                   {"discarded", discarded}};
    spit(file("pool.json"), j.dump(2) + "\n");
}

CandidatePool RunDirectory::load_pool() const {
    auto j = parse_json(file("pool.json"));
    CandidatePool pool;
    pool.iteration = j.value("iterations", 0);
    pool.elapsed_seconds = j.value("elapsed_seconds", 0.0);
    for (const auto& s : j.at("accepted")) pool.accepted.push_back(streamliner_from_json(s));
    for (const auto& s : j.value("discarded", ordered_json::array())) {
        pool.discarded.emplace_back(streamliner_from_json(s), s.value("reason", ""));
    }
    return pool;
}

void RunDirectory::save_portfolio(const Portfolio& portfolio,
                                  const std::vector<Streamliner>& members,
                                  double generation_seconds) {
    // Keyed interchange format, members in portfolio order.
    ordered_json keyed;
    for (std::size_t i = 0; i < members.size(); ++i) {
        keyed["streamliner_" + std::to_string(i + 1)] = members[i].constraint_text;
    }
    spit(file("portfolio.json"), keyed.dump(2) + "\n");

    ordered_json meta_members = ordered_json::array();
    for (const auto& s : members) meta_members.push_back(streamliner_to_json(s));
    ordered_json meta{{"members", meta_members},
                      {"score_seconds", portfolio.score_seconds},
                      {"selection_meta", portfolio.selection_meta},
                      {"generation_seconds", generation_seconds}};
    spit(file("portfolio_meta.json"), meta.dump(2) + "\n");
}

std::vector<Streamliner> RunDirectory::load_portfolio(double* generation_seconds) const {
    if (generation_seconds != nullptr) *generation_seconds = 0.0;
    if (has("portfolio_meta.json")) {
        auto meta = parse_json(file("portfolio_meta.json"));
        if (generation_seconds != nullptr) {
            *generation_seconds = meta.value("generation_seconds", 0.0);
        }
        std::vector<Streamliner> members;
        for (const auto& m : meta.at("members")) members.push_back(streamliner_from_json(m));
        return members;
    }
    // Interchange fallback: just the keyed constraints.
    auto keyed = parse_json(file("portfolio.json"));
    std::vector<Streamliner> members;
    for (const auto& [key, value] : keyed.items()) {
        Streamliner s;
        s.id = key;
        s.constraint_text = value.get<std::string>();
        s.origin.slot_key = key;
        members.push_back(std::move(s));
    }
    return members;
}

void RunDirectory::append_race(const RaceResult& result) {
    std::ofstream out(file("races.jsonl"), std::ios::app | std::ios::binary);
    for (const auto& lane : result.lanes) {
        ordered_json j{{"type", "lane"},
                       {"instance", result.instance_id},
                       {"lane", lane.lane_id},
                       {"disposition", to_string(lane.disposition)},
                       {"seconds", lane.seconds},
                       {"detail", lane.detail}};
        out << j.dump() << "\n";
    }
    ordered_json summary{{"type", "summary"},
                         {"instance", result.instance_id},
                         {"status", to_string(result.status)},
                         {"winner", result.winner.value_or("")},
                         {"winning_seconds", result.winning_seconds},
                         {"generation_seconds", result.generation_seconds}};
    if (result.baseline_seconds) summary["baseline_seconds"] = *result.baseline_seconds;
    out << summary.dump() << "\n";
}

std::vector<RaceResult> RunDirectory::load_races() const {
    std::istringstream in(slurp(file("races.jsonl")));
    std::string line;
    std::map<std::string, RaceResult> by_instance;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json j = ordered_json::parse(line);
        const std::string instance = j.at("instance").get<std::string>();
        if (by_instance.count(instance) == 0) {
            order.push_back(instance);
            by_instance[instance].instance_id = instance;
        }
        RaceResult& result = by_instance[instance];
        if (j.at("type") == "lane") {
            LaneRecord lane;
            lane.lane_id = j.at("lane").get<std::string>();
            const std::string d = j.at("disposition").get<std::string>();
            if (d == "sat") lane.disposition = LaneDisposition::Sat;
            else if (d == "unsat") lane.disposition = LaneDisposition::Unsat;
            else if (d == "timeout") lane.disposition = LaneDisposition::Timeout;
            else if (d == "error") lane.disposition = LaneDisposition::Error;
            else lane.disposition = LaneDisposition::Cancelled;
            lane.seconds = j.at("seconds").get<double>();
            lane.detail = j.value("detail", "");
            result.lanes.push_back(std::move(lane));
        } else {
            const std::string status = j.at("status").get<std::string>();
            if (status == "SAT") result.status = RaceStatus::Sat;
            else if (status == "UNSAT") result.status = RaceStatus::Unsat;
            else if (status == "TIMEOUT") result.status = RaceStatus::Timeout;
            else result.status = RaceStatus::Exhausted;
            const std::string winner = j.value("winner", "");
            if (!winner.empty()) result.winner = winner;
            result.winning_seconds = j.at("winning_seconds").get<double>();
            result.generation_seconds = j.value("generation_seconds", 0.0);
            if (j.contains("baseline_seconds")) {
                result.baseline_seconds = j["baseline_seconds"].get<double>();
            }
        }
    }
    std::vector<RaceResult> results;
    results.reserve(order.size());
    for (const auto& id : order) results.push_back(std::move(by_instance[id]));
    return results;
}

void RunDirectory::save_report(const RunReport& report) {
    ordered_json records = ordered_json::array();
    for (const auto& r : report.records) {
        const double reduction = time_reduction(r.t_orig, r.t_stream);
        records.push_back({{"problem", r.problem},
                           {"configuration", r.configuration},
                           {"run", r.run_label},
                           {"instance", r.instance_id},
                           {"t_orig", r.t_orig},
                           {"t_stream", r.t_stream},
                           {"t_generation", r.t_generation},
                           {"reduction_percent", reduction},
                           {"significant", reduction > report.threshold_percent},
                           {"net_saving_percent",
                            net_saving(r.t_orig, r.t_stream, r.t_generation)}});
    }
    ordered_json aggregates = ordered_json::array();
    for (const auto& a : report.aggregates) {
        ordered_json histogram = ordered_json::array();
        for (const auto& [bucket, count] : a.histogram) {
            histogram.push_back({{"bucket_start_min", bucket * 20}, {"count", count}});
        }
        ordered_json j{{"problem", a.problem},
                       {"configuration", a.configuration},
                       {"n_records", a.n_records},
                       {"mean_reduction_percent", a.mean_reduction_percent},
                       {"pct_significant", a.pct_significant},
                       {"mean_net_saving_percent", a.mean_net_saving_percent},
                       {"histogram", histogram}};
        if (a.run_delta_percent) j["run_delta_percent"] = *a.run_delta_percent;
        aggregates.push_back(std::move(j));
    }
    ordered_json j{{"threshold_percent", report.threshold_percent},
                   {"records", records},
                   {"aggregates", aggregates}};
    spit(file("report.json"), j.dump(2) + "\n");
    spit(file("report.txt"), render_report_table(report));
}

std::unique_ptr<RunLogger> RunDirectory::make_logger(Clock& clock) const {
    return std::make_unique<JsonlLogger>(file("run.log"), clock);
}

}  // namespace streamllm
