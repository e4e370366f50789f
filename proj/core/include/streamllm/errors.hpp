#pragma once

#include <stdexcept>
#include <string>

namespace streamllm {

// Solver executable missing or unrunnable. Deliberately distinct from an
// ERROR solve outcome so that misconfiguration is never recorded as a
// streamliner failure.
class EnvironmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Network-level failure after all retries were exhausted.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Replay fixture ran out of recorded responses.
class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No parsable candidate object in an LLM response. Carries the raw text
// so the run log can keep the evidence.
class ExtractionError : public std::runtime_error {
public:
    ExtractionError(const std::string& msg, std::string raw_text)
        : std::runtime_error(msg), raw_text_(std::move(raw_text)) {}
    const std::string& raw_text() const { return raw_text_; }

private:
    std::string raw_text_;
};

// Too few usable training instances to grade a representative set.
class GradingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No surviving candidate to select from.
class SelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Model text the obfuscator's lexer cannot tokenize.
class ObfuscationError : public std::runtime_error {
public:
    ObfuscationError(const std::string& msg, std::size_t position)
        : std::runtime_error(msg + " at offset " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_ = 0;
};

// Bad CLI flag / config file / environment combination.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace streamllm
