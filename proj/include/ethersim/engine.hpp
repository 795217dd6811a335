#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ethersim/sim_time.hpp"

namespace ethersim {

struct RunSummary {
    std::uint64_t events_fired = 0;
    SimTime final_clock = 0;
};

// Single-threaded discrete-event core.  Events fire in strict (fire_at, seq)
// order, where seq is the insertion counter, so simultaneous events replay
// identically on every platform.
class Engine {
public:
    using Callback = std::function<void()>;

    struct EventHandle {
        std::uint64_t seq = 0;  // 0 = invalid / already spent
    };

    SimTime now() const { return now_; }

    // Scheduling in the past is an engine bug, not a recoverable error.
    EventHandle schedule_at(SimTime fire_at, Callback cb);
    EventHandle schedule_in(SimTime delay, Callback cb) { return schedule_at(now_ + delay, std::move(cb)); }

    void cancel(EventHandle& h);

    // Fires every event with fire_at <= t_end, then advances the clock to
    // t_end (an empty queue just fast-forwards).
    RunSummary run_until(SimTime t_end);

    bool empty() const { return queue_.size() == cancelled_.size(); }
    std::uint64_t total_fired() const { return fired_; }

    // Optional (fire_at, seq) log, used by determinism tests.
    void record_firings(bool on) { record_ = on; }
    const std::vector<std::pair<SimTime, std::uint64_t>>& firing_log() const { return firing_log_; }

private:
    struct Entry {
        SimTime at;
        std::uint64_t seq;
        Callback cb;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.at != b.at) return a.at > b.at;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    SimTime now_ = 0;
    std::uint64_t next_seq_ = 1;
    std::uint64_t fired_ = 0;
    bool record_ = false;
    std::vector<std::pair<SimTime, std::uint64_t>> firing_log_;
};

}  // namespace ethersim
