#pragma once

#include <string>
#include <utility>
#include <vector>

namespace streamllm {

using LogFields = std::vector<std::pair<std::string, std::string>>;

// Append-only event sink. The run-directory implementation timestamps each
// event from the pipeline clock and writes line-delimited records; the
// captured stream is sufficient to replay a run byte-for-byte with the
// fixture provider.
class RunLogger {
public:
    virtual ~RunLogger() = default;
    virtual void log(const std::string& event, const LogFields& fields) = 0;
};

// Collects events in memory; handy in tests.
class MemoryLogger final : public RunLogger {
public:
    struct Entry {
        std::string event;
        LogFields fields;
    };
    void log(const std::string& event, const LogFields& fields) override {
        entries.push_back({event, fields});
    }
    std::vector<Entry> entries;
};

}  // namespace streamllm
