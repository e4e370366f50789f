#pragma once

#include <chrono>
#include <mutex>

namespace streamllm {

// Monotonic run clock, in seconds since construction. Every component that
// timestamps events or checks a budget reads this interface, so a whole
// pipeline can run under virtual time and stay bit-reproducible.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() const = 0;
};

class WallClock final : public Clock {
public:
    WallClock() : start_(std::chrono::steady_clock::now()) {}
    double now() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Advanced explicitly by the fake solver and the race simulator.
class VirtualClock final : public Clock {
public:
    double now() const override {
        std::lock_guard<std::mutex> lock(mutex_);
        return t_;
    }
    void advance(double seconds) {
        std::lock_guard<std::mutex> lock(mutex_);
        t_ += seconds;
    }
    // Moves the clock forward to an absolute point; never moves it back.
    void advance_to(double seconds) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (seconds > t_) t_ = seconds;
    }

private:
    mutable std::mutex mutex_;
    double t_ = 0.0;
};

}  // namespace streamllm
