#include "streamllm/llm_client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "streamllm/errors.hpp"

namespace fs = std::filesystem;

namespace streamllm {

namespace {

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("bad endpoint url: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FixtureError("cannot read fixture file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ProviderConfig ProviderConfig::openai_default() {
    ProviderConfig c;
    c.kind = ProviderKind::OpenAICompatible;
    c.endpoint_url = "https://api.openai.com/v1/chat/completions";
    c.model_name = "gpt-4o";
    c.auth_env_var = "STREAMLLM_OPENAI_KEY";
    return c;
}

ProviderConfig ProviderConfig::anthropic_default() {
    ProviderConfig c;
    c.kind = ProviderKind::AnthropicMessages;
    c.endpoint_url = "https://api.anthropic.com/v1/messages";
    c.model_name = "claude-3-5-sonnet-20240620";
    c.auth_env_var = "STREAMLLM_ANTHROPIC_KEY";
    return c;
}

ProviderConfig ProviderConfig::fixture(std::string dir) {
    ProviderConfig c;
    c.kind = ProviderKind::ReplayFixture;
    c.fixture_dir = std::move(dir);
    c.model_name = "fixture";
    return c;
}

LlmClient::LlmClient(ProviderConfig config) : config_(std::move(config)) {
    if (config_.kind == ProviderKind::ReplayFixture && config_.fixture_dir.empty()) {
        throw ConfigError("replay fixture provider requires a fixture directory");
    }
}

RawResponse LlmClient::query(const std::string& prompt) {
    ++query_count_;
    if (config_.kind == ProviderKind::ReplayFixture) return query_fixture();
    return query_network(prompt);
}

RawResponse LlmClient::query_fixture() {
    if (!fixture_scanned_) {
        if (!fs::is_directory(config_.fixture_dir)) {
            throw FixtureError("fixture directory not found: " + config_.fixture_dir);
        }
        for (const auto& entry : fs::directory_iterator(config_.fixture_dir)) {
            if (entry.is_regular_file()) fixture_files_.push_back(entry.path().string());
        }
        std::sort(fixture_files_.begin(), fixture_files_.end());
        fixture_scanned_ = true;
    }
    if (fixture_index_ >= static_cast<int>(fixture_files_.size())) {
        throw FixtureError("fixture exhausted after " + std::to_string(fixture_index_) +
                           " responses (" + config_.fixture_dir + ")");
    }
    RawResponse r;
    r.text = read_file(fixture_files_[fixture_index_++]);
    return r;
}

void LlmClient::record_response(const std::string& text) {
    if (config_.record_dir.empty()) return;
    fs::create_directories(config_.record_dir);
    char name[16];
    std::snprintf(name, sizeof(name), "%03d.txt", query_count_ - 1);
    std::ofstream out(fs::path(config_.record_dir) / name, std::ios::binary);
    out << text;
}

RawResponse LlmClient::query_network(const std::string& prompt) {
    const char* key = nullptr;
    if (!config_.auth_env_var.empty()) {
        key = std::getenv(config_.auth_env_var.c_str());
    }
    if (key == nullptr || *key == '\0') {
        throw ConfigError("API key not found in environment variable " + config_.auth_env_var);
    }

    const ParsedUrl url = split_url(config_.endpoint_url);
    nlohmann::json body;
    httplib::Headers headers;
    if (config_.kind == ProviderKind::OpenAICompatible) {
        body = {{"model", config_.model_name},
                {"messages", {{{"role", "user"}, {"content", prompt}}}}};
        headers.emplace("Authorization", std::string("Bearer ") + key);
    } else {
        body = {{"model", config_.model_name},
                {"max_tokens", 4096},
                {"messages", {{{"role", "user"}, {"content", prompt}}}}};
        headers.emplace("x-api-key", key);
        headers.emplace("anthropic-version", "2023-06-01");
    }
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            double backoff = config_.retry_backoff_seconds * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        }
        httplib::Client client(url.origin);
        client.set_connection_timeout(std::chrono::duration<double>(config_.request_timeout_seconds));
        client.set_read_timeout(std::chrono::duration<double>(config_.request_timeout_seconds));

        const auto start = std::chrono::steady_clock::now();
        httplib::Result res = client.Post(url.path, headers, payload, "application/json");
        const double latency =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (!res) {
            last_error = "connection error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        try {
            nlohmann::json doc = nlohmann::json::parse(res->body);
            RawResponse out;
            out.latency_seconds = latency;
            if (config_.kind == ProviderKind::OpenAICompatible) {
                out.text = doc.at("choices").at(0).at("message").at("content").get<std::string>();
                if (doc.contains("usage")) {
                    out.prompt_tokens = doc["usage"].value("prompt_tokens", -1);
                    out.completion_tokens = doc["usage"].value("completion_tokens", -1);
                }
            } else {
                out.text = doc.at("content").at(0).at("text").get<std::string>();
                if (doc.contains("usage")) {
                    out.prompt_tokens = doc["usage"].value("input_tokens", -1);
                    out.completion_tokens = doc["usage"].value("output_tokens", -1);
                }
            }
            record_response(out.text);
            return out;
        } catch (const nlohmann::json::exception& e) {
            last_error = std::string("unexpected response shape: ") + e.what();
            continue;
        }
    }
    throw TransportError("LLM request failed after " + std::to_string(config_.max_retries + 1) +
                         " attempts: " + last_error);
}

ExtractedCandidates extract_streamliners(const RawResponse& response, int n_expected) {
    (void)n_expected;  // callers compare and log the discrepancy
    const std::string& text = response.text;

    // Walk every '{' and try to parse the balanced span it opens. Brace
    // counting is string-literal aware so braces inside values don't
    // unbalance the scan.
    nlohmann::json object;
    bool found = false;
    for (std::size_t open = text.find('{'); open != std::string::npos && !found;
         open = text.find('{', open + 1)) {
        int depth = 0;
        bool in_string = false, escaped = false;
        for (std::size_t i = open; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (escaped) {
                    escaped = false;
                } else if (c == '\\') {
                    escaped = true;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    nlohmann::json parsed = nlohmann::json::parse(
                        text.substr(open, i - open + 1), nullptr, /*allow_exceptions=*/false);
                    if (!parsed.is_discarded() && parsed.is_object()) {
                        object = std::move(parsed);
                        found = true;
                    }
                    break;
                }
            }
        }
    }
    if (!found) {
        throw ExtractionError("no parsable JSON object in response", text);
    }

    static const std::regex kSlotKey("^streamliner_([0-9]+)$");
    std::vector<std::pair<int, std::string>> slots;  // (index, key)
    ExtractedCandidates result;
    for (const auto& [key, value] : object.items()) {
        std::smatch m;
        if (!std::regex_match(key, m, kSlotKey)) continue;
        ++result.keys_found;
        slots.emplace_back(std::stoi(m[1].str()), key);
    }
    std::sort(slots.begin(), slots.end());

    for (const auto& [index, key] : slots) {
        const auto& value = object[key];
        if (!value.is_string()) continue;
        auto normalized = normalize_streamliner(value.get<std::string>());
        if (!normalized) continue;
        Streamliner s;
        s.constraint_text = *normalized;
        s.origin.slot_key = key;
        result.streamliners.push_back(std::move(s));
    }
    return result;
}

}  // namespace streamllm
