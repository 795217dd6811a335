#include "ethersim/engine.hpp"

#include <stdexcept>
#include <string>

namespace ethersim {

Engine::EventHandle Engine::schedule_at(SimTime fire_at, Callback cb) {
    if (fire_at < now_) {
        throw std::logic_error("Engine::schedule_at: event in the past (t=" + std::to_string(fire_at) +
                               ", now=" + std::to_string(now_) + ")");
    }
    const std::uint64_t seq = next_seq_++;
    queue_.push(Entry{fire_at, seq, std::move(cb)});
    return EventHandle{seq};
}

void Engine::cancel(EventHandle& h) {
    if (h.seq != 0) {
        cancelled_.insert(h.seq);
        h.seq = 0;
    }
}

RunSummary Engine::run_until(SimTime t_end) {
    std::uint64_t fired_here = 0;
    while (!queue_.empty()) {
        const Entry& top = queue_.top();
        if (auto it = cancelled_.find(top.seq); it != cancelled_.end()) {
            cancelled_.erase(it);
            queue_.pop();
            continue;
        }
        if (top.at > t_end) break;
        Entry entry = std::move(const_cast<Entry&>(top));
        queue_.pop();
        if (entry.at < now_) throw std::logic_error("Engine: clock went backwards");
        now_ = entry.at;
        ++fired_;
        ++fired_here;
        if (record_) firing_log_.emplace_back(entry.at, entry.seq);
        entry.cb();
    }
    if (t_end > now_) now_ = t_end;
    return RunSummary{fired_here, now_};
}

}  // namespace ethersim
