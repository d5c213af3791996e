#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <stop_token>

namespace sudoku {

using Clock = std::chrono::steady_clock;
using Seconds = std::chrono::duration<double>;

/// Cooperative wall-clock budget, optionally tied to a stop token so a
/// watchdog can cut a run short.
class Deadline {
public:
    Deadline() = default;

    static Deadline none() { return {}; }
    static Deadline after(Clock::duration budget, std::stop_token stop = {}) {
        Deadline d;
        d.at_ = Clock::now() + budget;
        d.stop_ = std::move(stop);
        return d;
    }
    static Deadline from(std::optional<Clock::duration> budget, std::stop_token stop = {}) {
        if (budget) return after(*budget, std::move(stop));
        Deadline d;
        d.stop_ = std::move(stop);
        return d;
    }

    /// This deadline or now + budget, whichever comes first; same stop token.
    Deadline capped(Clock::duration budget) const {
        Deadline d = after(budget, stop_);
        if (at_ && *at_ < *d.at_) d.at_ = at_;
        return d;
    }

    bool expired() const {
        if (stop_.stop_requested()) return true;
        return at_ && Clock::now() >= *at_;
    }

    bool bounded() const { return at_.has_value(); }
    std::optional<Clock::time_point> at() const { return at_; }
    const std::stop_token& stop_token() const { return stop_; }

private:
    std::optional<Clock::time_point> at_;
    std::stop_token stop_;
};

class TimeoutError : public std::runtime_error {
public:
    TimeoutError() : std::runtime_error("deadline exceeded") {}
};

}  // namespace sudoku
