#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamllm/model.hpp"

namespace streamllm {

enum class ProviderKind { OpenAICompatible, AnthropicMessages, ReplayFixture };

struct ProviderConfig {
    ProviderKind kind = ProviderKind::ReplayFixture;
    std::string endpoint_url;  // network kinds: full URL including path
    std::string model_name;
    std::string auth_env_var;  // name of the env var holding the API key
    double request_timeout_seconds = 120.0;
    int max_retries = 3;
    double retry_backoff_seconds = 0.5;  // doubled per attempt
    std::string fixture_dir;  // ReplayFixture: numbered response files
    std::string record_dir;   // network kinds: record every response here

    static ProviderConfig openai_default();
    static ProviderConfig anthropic_default();
    static ProviderConfig fixture(std::string dir);
};

// Completion text recorded verbatim, plus whatever metadata the provider
// reported.
struct RawResponse {
    std::string text;
    double latency_seconds = 0.0;
    long prompt_tokens = -1;
    long completion_tokens = -1;
};

// Blocking LLM access. The prompt goes out as a single user message with no
// system message. Transport failures are retried with exponential backoff;
// exhausting the retries raises TransportError. A replay fixture serves the
// recorded responses in file order and raises FixtureError when drained.
class LlmClient {
public:
    explicit LlmClient(ProviderConfig config);

    RawResponse query(const std::string& prompt);

    const ProviderConfig& config() const { return config_; }
    int queries_sent() const { return query_count_; }

private:
    RawResponse query_fixture();
    RawResponse query_network(const std::string& prompt);
    void record_response(const std::string& text);

    ProviderConfig config_;
    std::vector<std::string> fixture_files_;  // sorted, resolved lazily
    bool fixture_scanned_ = false;
    int fixture_index_ = 0;
    int query_count_ = 0;
};

// Extraction result: candidates keep their slot keys; ids and the rest of
// the origin are assigned by the caller.
struct ExtractedCandidates {
    std::vector<Streamliner> streamliners;
    int keys_found = 0;  // "streamliner_<i>" keys present, parsable or not
};

// Finds the first balanced JSON object in the response (prose and code
// fences around it are fine), reads the "streamliner_<i>" keys in ascending
// i, and normalizes each value. Values that are not top-level constraint
// items are dropped. Raises ExtractionError (carrying the raw text) when no
// parsable object exists.
ExtractedCandidates extract_streamliners(const RawResponse& response, int n_expected);

}  // namespace streamllm
