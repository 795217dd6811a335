#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

#include "ethersim/engine.hpp"
#include "ethersim/rng.hpp"
#include "ethersim/sim_time.hpp"

namespace ethersim {

using StationId = std::uint32_t;

// 10BASE Ethernet timing, overridable from the experiment config.
struct EthernetParams {
    std::int64_t bandwidth_bps = 10'000'000;
    SimTime prop_delay = 950;                   // ns
    SimTime slot_time = 51'200;                 // 51.2 us
    SimTime jam_time = 3'200;                   // 3.2 us
    SimTime ifg = 9'600;                        // 9.6 us
    int max_retx = 3;                           // consecutive collisions before the frame is dropped
    int backoff_exponent_cap = 10;
    std::size_t queue_depth = 100;              // per-station transmit queue

    void validate() const;  // throws std::invalid_argument naming the violated constraint

    // Wire time for a payload, rounded up to whole ticks.
    SimTime frame_duration(std::uint64_t payload_bytes) const;
};

enum class FrameKind : std::uint8_t { Data, Request };

struct Frame {
    StationId src = 0;
    StationId dst = 0;
    std::uint32_t payload_bytes = 0;
    std::uint64_t seq = 0;           // per-sender counter, assigned on accept
    SimTime enqueue_time = 0;
    std::uint64_t transfer_id = 0;   // opaque tag for the traffic source
    FrameKind kind = FrameKind::Data;
};

enum class MacPhase : std::uint8_t { Idle, Deferring, WaitingIfg, Transmitting, Jamming, Backoff };

enum class DropReason : std::uint8_t { ExcessiveCollisions, QueueOverflow };

struct StationCounters {
    std::uint64_t enqueue_attempts = 0;
    std::uint64_t accepted = 0;
    std::uint64_t delivered = 0;
    std::uint64_t bytes_delivered = 0;
    std::uint64_t collisions = 0;
    std::uint64_t drops_excess = 0;
    std::uint64_t drops_overflow = 0;
    int max_attempts_seen = 0;  // attempts on any single frame (1 = first try)
};

// Uniform backoff slot draw for the i-th consecutive collision:
// k in [0, 2^min(i, cap) - 1].
int backoff_slots(int attempt_i, int max_retx, int exponent_cap, RngStream& rng);

// One shared-bus collision domain with uniform propagation delay between all
// station pairs.  Everything runs inside engine event handlers; a signal put
// on the wire at t becomes audible to the other stations at t + prop_delay,
// so two stations that start within that window collide.  Any overlap of
// live signals is a collision for every participant.
class MacBus {
public:
    using DeliveryFn = std::function<void(const Frame&, SimTime completed_at)>;
    using DropFn = std::function<void(const Frame&, DropReason, SimTime)>;

    MacBus(Engine& engine, EthernetParams params, std::uint32_t n_stations, std::uint64_t master_seed);

    void set_delivery_callback(DeliveryFn fn) { on_delivery_ = std::move(fn); }
    void set_drop_callback(DropFn fn) { on_drop_ = std::move(fn); }

    // Appends to the station's transmit queue and kicks off an attempt when
    // the station is idle.  Returns false (and counts an overflow drop) when
    // the queue is full.
    bool enqueue_frame(StationId station, Frame frame);

    // Carrier sense as seen by `station` at time t: busy iff some other
    // station's signal, delayed by prop_delay, covers t.
    bool sense_channel(StationId station, SimTime t) const;

    const EthernetParams& params() const { return params_; }
    std::uint32_t n_stations() const { return static_cast<std::uint32_t>(stations_.size()); }

    MacPhase phase(StationId s) const { return stations_[s].phase; }
    int attempt(StationId s) const { return stations_[s].attempt; }
    std::size_t queue_length(StationId s) const { return stations_[s].queue.size(); }
    const StationCounters& counters(StationId s) const { return stations_[s].counters; }

    StationCounters totals() const;
    std::uint64_t residual_frames() const;

    // Cumulative time with at least one live signal on the wire.
    SimTime busy_time() const;

    // Throws std::logic_error if the frame ledger does not balance:
    // attempts == delivered + excess drops + overflow drops + residual.
    void check_conservation() const;

private:
    struct Signal {
        SimTime start = 0;
        SimTime end = 0;     // scheduled end; extended when the station jams
        bool live = false;   // currently on the wire
    };

    struct Station {
        MacPhase phase = MacPhase::Idle;
        int attempt = 0;  // consecutive collisions on the head frame
        std::deque<Frame> queue;
        RngStream rng;
        Engine::EventHandle timer;    // defer wake / ifg / backoff / jam end
        Engine::EventHandle tx_done;
        Engine::EventHandle detect;
        std::uint64_t next_seq = 0;
        StationCounters counters;

        explicit Station(RngStream r) : rng(std::move(r)) {}
    };

    void attempt_transmission(StationId s);
    void begin_transmission(StationId s);
    void handle_defer_wake(StationId s);
    void handle_ifg_done(StationId s);
    void handle_collision(StationId s);
    void handle_jam_done(StationId s);
    void handle_backoff_done(StationId s);
    void handle_tx_complete(StationId s);

    // Earliest instant >= t at which the channel can look idle to s, given
    // the signals known now.  Re-sensed on wake, since new signals may have
    // appeared in the meantime.
    SimTime sensed_idle_at(StationId s, SimTime t) const;

    void defer(StationId s);
    void add_signal(StationId s, SimTime end);
    void extend_signal_for_jam(StationId s, SimTime new_end);
    void remove_signal(StationId s);
    void account_busy();

    Engine& engine_;
    EthernetParams params_;
    std::vector<Station> stations_;
    std::vector<Signal> signals_;   // one slot per station; keeps the last
                                    // finished signal for the sense tail
    int live_signals_ = 0;
    SimTime busy_accum_ = 0;
    SimTime busy_last_change_ = 0;
    DeliveryFn on_delivery_;
    DropFn on_drop_;
};

}  // namespace ethersim
