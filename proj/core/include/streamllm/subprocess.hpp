#pragma once

#include <atomic>
#include <string>
#include <vector>

namespace streamllm {

// Cooperative cancellation for an in-flight solve. The racer sets it when
// another lane wins; the process runner polls it.
class CancelToken {
public:
    void cancel() { cancelled_.store(true, std::memory_order_relaxed); }
    bool cancelled() const { return cancelled_.load(std::memory_order_relaxed); }

private:
    std::atomic<bool> cancelled_{false};
};

struct ProcessResult {
    int exit_code = -1;        // valid only when !killed
    bool killed = false;       // terminated by deadline or cancellation
    bool cancelled = false;    // killed because the token was set
    double wall_seconds = 0.0; // measured spawn -> reap
    std::string stdout_text;
    std::string stderr_text;
};

// Runs argv[0] with the given arguments, capturing stdout/stderr in full.
// The child gets its own process group; at kill_after_seconds the whole
// group receives SIGKILL (grandchildren included), likewise on cancellation.
// Throws EnvironmentError when the executable cannot be spawned; that is a
// configuration failure, not a process outcome.
ProcessResult run_process(const std::vector<std::string>& argv,
                          double kill_after_seconds,
                          const CancelToken* cancel = nullptr);

// Number of child process groups currently alive. Zero after every solve
// and race has returned; tests assert on it.
int active_child_count();

}  // namespace streamllm
