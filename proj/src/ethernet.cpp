#include "ethersim/ethernet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ethersim {

void EthernetParams::validate() const {
    if (bandwidth_bps <= 0) throw std::invalid_argument("bandwidth_bps must be > 0");
    if (prop_delay <= 0) throw std::invalid_argument("prop_delay must be > 0");
    if (slot_time <= 0) throw std::invalid_argument("slot_time must be > 0");
    if (jam_time <= 0) throw std::invalid_argument("jam_time must be > 0");
    if (ifg <= 0) throw std::invalid_argument("ifg must be > 0");
    if (slot_time < 2 * prop_delay) {
        throw std::invalid_argument("slot_time must be at least twice prop_delay");
    }
    if (max_retx < 1) throw std::invalid_argument("max_retx must be >= 1");
    if (backoff_exponent_cap < 1 || backoff_exponent_cap > 62) {
        throw std::invalid_argument("backoff_exponent_cap must be in [1, 62]");
    }
    if (queue_depth < 1) throw std::invalid_argument("queue_depth must be >= 1");
}

SimTime EthernetParams::frame_duration(std::uint64_t payload_bytes) const {
    const std::int64_t bits = static_cast<std::int64_t>(payload_bytes) * 8;
    return (bits * kTicksPerSecond + bandwidth_bps - 1) / bandwidth_bps;
}

int backoff_slots(int attempt_i, int max_retx, int exponent_cap, RngStream& rng) {
    if (attempt_i < 1 || attempt_i > max_retx) {
        throw std::invalid_argument("backoff_slots: attempt_i=" + std::to_string(attempt_i) +
                                    " outside [1, max_retx=" + std::to_string(max_retx) + "]");
    }
    const int exponent = std::min(attempt_i, exponent_cap);
    return static_cast<int>(rng.uniform_below(std::uint64_t{1} << exponent));
}

MacBus::MacBus(Engine& engine, EthernetParams params, std::uint32_t n_stations, std::uint64_t master_seed)
    : engine_(engine), params_(params), signals_(n_stations) {
    params_.validate();
    if (n_stations < 1) throw std::invalid_argument("MacBus: need at least one station");
    stations_.reserve(n_stations);
    for (std::uint32_t i = 0; i < n_stations; ++i) {
        stations_.emplace_back(RngStream(master_seed, "station-" + std::to_string(i)));
        signals_[i] = Signal{0, 0, false};
    }
}

bool MacBus::enqueue_frame(StationId station, Frame frame) {
    if (station >= stations_.size()) throw std::invalid_argument("enqueue_frame: bad station id");
    if (frame.src != station) throw std::invalid_argument("enqueue_frame: frame.src must match the station");
    if (frame.dst >= stations_.size() || frame.dst == frame.src) {
        throw std::invalid_argument("enqueue_frame: bad destination");
    }
    if (frame.payload_bytes == 0) throw std::invalid_argument("enqueue_frame: empty payload");

    Station& st = stations_[station];
    st.counters.enqueue_attempts++;
    if (st.queue.size() >= params_.queue_depth) {
        st.counters.drops_overflow++;
        if (on_drop_) on_drop_(frame, DropReason::QueueOverflow, engine_.now());
        return false;
    }
    frame.seq = st.next_seq++;
    frame.enqueue_time = engine_.now();
    st.queue.push_back(frame);
    st.counters.accepted++;
    if (st.phase == MacPhase::Idle) attempt_transmission(station);
    return true;
}

bool MacBus::sense_channel(StationId station, SimTime t) const {
    for (std::uint32_t u = 0; u < signals_.size(); ++u) {
        if (u == station) continue;
        const Signal& sig = signals_[u];
        if (sig.end == 0 && sig.start == 0 && !sig.live) continue;  // never transmitted
        if (sig.start + params_.prop_delay <= t && t < sig.end + params_.prop_delay) return true;
    }
    return false;
}

SimTime MacBus::sensed_idle_at(StationId station, SimTime t) const {
    SimTime idle_at = t;
    for (std::uint32_t u = 0; u < signals_.size(); ++u) {
        if (u == station) continue;
        const Signal& sig = signals_[u];
        if (sig.end == 0 && sig.start == 0 && !sig.live) continue;
        idle_at = std::max(idle_at, sig.end + params_.prop_delay);
    }
    return idle_at;
}

void MacBus::attempt_transmission(StationId s) {
    Station& st = stations_[s];
    if (st.queue.empty()) throw std::logic_error("attempt_transmission with empty queue");
    if (sense_channel(s, engine_.now())) {
        defer(s);
    } else {
        st.phase = MacPhase::WaitingIfg;
        st.timer = engine_.schedule_in(params_.ifg, [this, s] { handle_ifg_done(s); });
    }
}

void MacBus::defer(StationId s) {
    Station& st = stations_[s];
    st.phase = MacPhase::Deferring;
    const SimTime wake = sensed_idle_at(s, engine_.now());
    st.timer = engine_.schedule_at(wake, [this, s] { handle_defer_wake(s); });
}

// Re-sense on wake: new signals may have appeared while we slept, in which
// case we defer again to the pushed-out transition.
void MacBus::handle_defer_wake(StationId s) {
    stations_[s].timer = Engine::EventHandle{};
    attempt_transmission(s);
}

// The inter-frame gap is not interruptible: once a station has sensed idle
// and committed to the gap, it transmits at the end of it.  A carrier that
// appeared meanwhile is resolved as a collision, which is what arbitrates
// the channel after every busy period.
void MacBus::handle_ifg_done(StationId s) {
    stations_[s].timer = Engine::EventHandle{};
    begin_transmission(s);
}

void MacBus::begin_transmission(StationId s) {
    Station& st = stations_[s];
    if (st.attempt > params_.max_retx) throw std::logic_error("begin_transmission: attempt bound exceeded");
    st.counters.max_attempts_seen = std::max(st.counters.max_attempts_seen, st.attempt + 1);

    const SimTime now = engine_.now();
    const SimTime duration = params_.frame_duration(st.queue.front().payload_bytes);
    const SimTime end = now + duration;
    st.phase = MacPhase::Transmitting;
    add_signal(s, end);

    // Any live overlap is a collision for every participant.  Each station
    // hears the other signal prop_delay after it started (immediately, when
    // it knowingly started into an audible carrier); a station whose
    // transmission would finish first learns at its own end instead.
    SimTime my_detect = 0;
    for (std::uint32_t u = 0; u < signals_.size(); ++u) {
        if (u == s || !signals_[u].live) continue;
        if (signals_[u].end <= now) continue;  // ends this tick, no overlap
        const SimTime arrival = std::max(now, signals_[u].start + params_.prop_delay);
        my_detect = my_detect == 0 ? arrival : std::min(my_detect, arrival);

        Station& other = stations_[u];
        if (other.phase == MacPhase::Transmitting && other.detect.seq == 0) {
            engine_.cancel(other.tx_done);
            const SimTime other_detect = std::min(now + params_.prop_delay, signals_[u].end);
            other.detect = engine_.schedule_at(other_detect, [this, u] { handle_collision(u); });
        }
    }

    if (my_detect == 0) {
        st.tx_done = engine_.schedule_at(end, [this, s] { handle_tx_complete(s); });
    } else {
        st.detect = engine_.schedule_at(std::min(my_detect, end), [this, s] { handle_collision(s); });
    }
}

void MacBus::handle_collision(StationId s) {
    Station& st = stations_[s];
    st.detect = Engine::EventHandle{};
    st.counters.collisions++;
    st.attempt++;
    if (st.attempt > params_.max_retx + 1) throw std::logic_error("collision: attempt bound exceeded");
    st.phase = MacPhase::Jamming;
    const SimTime jam_end = engine_.now() + params_.jam_time;
    extend_signal_for_jam(s, jam_end);
    st.timer = engine_.schedule_at(jam_end, [this, s] { handle_jam_done(s); });
}

void MacBus::handle_jam_done(StationId s) {
    Station& st = stations_[s];
    st.timer = Engine::EventHandle{};
    remove_signal(s);

    if (st.attempt > params_.max_retx) {
        const Frame dropped = st.queue.front();
        st.queue.pop_front();
        st.attempt = 0;
        st.counters.drops_excess++;
        if (!st.queue.empty()) {
            attempt_transmission(s);
        } else {
            st.phase = MacPhase::Idle;
        }
        if (on_drop_) on_drop_(dropped, DropReason::ExcessiveCollisions, engine_.now());
    } else {
        const int slots = backoff_slots(st.attempt, params_.max_retx, params_.backoff_exponent_cap, st.rng);
        st.phase = MacPhase::Backoff;
        st.timer = engine_.schedule_in(static_cast<SimTime>(slots) * params_.slot_time,
                                       [this, s] { handle_backoff_done(s); });
    }
}

void MacBus::handle_backoff_done(StationId s) {
    stations_[s].timer = Engine::EventHandle{};
    attempt_transmission(s);
}

void MacBus::handle_tx_complete(StationId s) {
    Station& st = stations_[s];
    st.tx_done = Engine::EventHandle{};
    remove_signal(s);

    const Frame frame = st.queue.front();
    st.queue.pop_front();
    st.attempt = 0;
    st.counters.delivered++;
    st.counters.bytes_delivered += frame.payload_bytes;

    if (!st.queue.empty()) {
        st.phase = MacPhase::WaitingIfg;
        st.timer = engine_.schedule_in(params_.ifg, [this, s] { handle_ifg_done(s); });
    } else {
        st.phase = MacPhase::Idle;
    }
    if (on_delivery_) on_delivery_(frame, engine_.now());
}

void MacBus::account_busy() {
    const SimTime now = engine_.now();
    if (live_signals_ > 0) busy_accum_ += now - busy_last_change_;
    busy_last_change_ = now;
}

void MacBus::add_signal(StationId s, SimTime end) {
    account_busy();
    signals_[s] = Signal{engine_.now(), end, true};
    live_signals_++;
}

void MacBus::extend_signal_for_jam(StationId s, SimTime new_end) {
    signals_[s].end = new_end;  // contiguous wire activity, original start kept
}

void MacBus::remove_signal(StationId s) {
    account_busy();
    signals_[s].live = false;
    live_signals_--;
}

SimTime MacBus::busy_time() const {
    SimTime busy = busy_accum_;
    if (live_signals_ > 0) busy += engine_.now() - busy_last_change_;
    return busy;
}

StationCounters MacBus::totals() const {
    StationCounters t;
    for (const Station& st : stations_) {
        t.enqueue_attempts += st.counters.enqueue_attempts;
        t.accepted += st.counters.accepted;
        t.delivered += st.counters.delivered;
        t.bytes_delivered += st.counters.bytes_delivered;
        t.collisions += st.counters.collisions;
        t.drops_excess += st.counters.drops_excess;
        t.drops_overflow += st.counters.drops_overflow;
        t.max_attempts_seen = std::max(t.max_attempts_seen, st.counters.max_attempts_seen);
    }
    return t;
}

std::uint64_t MacBus::residual_frames() const {
    std::uint64_t n = 0;
    for (const Station& st : stations_) n += st.queue.size();
    return n;
}

void MacBus::check_conservation() const {
    const StationCounters t = totals();
    const std::uint64_t accounted = t.delivered + t.drops_excess + t.drops_overflow + residual_frames();
    if (t.enqueue_attempts != accounted) {
        throw std::logic_error("frame conservation violated: enqueued " + std::to_string(t.enqueue_attempts) +
                               " != accounted " + std::to_string(accounted));
    }
    if (t.max_attempts_seen > params_.max_retx + 1) {
        throw std::logic_error("attempt truncation violated: a frame saw " +
                               std::to_string(t.max_attempts_seen) + " attempts");
    }
}

}  // namespace ethersim
