#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ethersim/engine.hpp"
#include "ethersim/ethernet.hpp"
#include "ethersim/rng.hpp"

namespace ethersim {

enum class Role : std::uint8_t { Client, Server };

// Stations 0..n_clients-1 are clients, the rest are servers.
struct Topology {
    std::uint32_t n_clients = 32;
    std::uint32_t n_servers = 2;

    std::uint32_t n_stations() const { return n_clients + n_servers; }
    Role role(StationId s) const { return s < n_clients ? Role::Client : Role::Server; }
    StationId server(std::uint32_t i) const { return n_clients + i; }
    void validate() const;
};

struct DistSpec {
    enum class Kind : std::uint8_t { Constant, Exponential, Pareto };

    Kind kind = Kind::Exponential;
    double mean = 1.0;
    double shape = 1.5;  // Pareto only; must be > 1 so the mean is finite

    double sample(RngStream& rng) const;
    void validate(const std::string& what) const;

    // "constant 5120" | "exponential 65536" | "pareto 65536 1.5"
    static DistSpec parse(const std::string& text);
    std::string to_string() const;
};

constexpr std::uint32_t kRequestFrameBytes = 64;
constexpr std::uint32_t kDataFrameBytes = 1024;

// Segments a server keeps in its transmit queue per transfer.  The reply is
// streamed with backpressure rather than dumped whole, so congestion slows
// transfers down instead of truncating them at the queue depth.
constexpr std::uint32_t kServerWindowFrames = 8;

struct WorkloadConfig {
    DistSpec file_size{DistSpec::Kind::Exponential, 65536.0};
    // Seconds of client idle time between transfers; when unset the mean is
    // calibrated from the offered-load target below.
    std::optional<DistSpec> think_time;
    double target_utilization = 0.40;

    void validate() const;
};

// Mean think time (seconds) that makes the offered load of n_clients
// request/reply cycles approximate target_utilization of the channel.
double calibrated_think_mean_s(const Topology& topo, const EthernetParams& ether,
                               double mean_file_bytes, double target_utilization);

// Splits a file into 1 KB payloads plus a final remainder frame.
std::vector<std::uint32_t> segment_file(std::uint64_t file_bytes);

struct WorkloadStats {
    std::uint64_t transfers_started = 0;
    std::uint64_t transfers_completed = 0;
    std::uint64_t transfers_failed_request = 0;  // request frame never reached the server
    std::uint64_t file_bytes_offered = 0;
    std::uint64_t file_bytes_delivered = 0;
    std::uint64_t file_bytes_dropped = 0;
};

// Client/server file-transfer source.  Each client cycles through
// think -> request (64 B frame to a uniformly chosen server) -> the server
// streams the file back as fixed 1 KB frames.  Dropped segments are final;
// a transfer completes when every segment is delivered or dropped.
class Workload {
public:
    Workload(Engine& engine, MacBus& mac, Topology topo, WorkloadConfig config,
             double think_mean_s, std::uint64_t master_seed);

    // Schedules the initial think timer of every client.
    void start();

    // Routed from the MAC callbacks by the simulation wiring.
    void handle_delivery(const Frame& frame, SimTime t);
    void handle_drop(const Frame& frame, DropReason reason, SimTime t);

    const WorkloadStats& stats() const { return stats_; }
    std::uint64_t transfers_in_flight() const { return inflight_.size(); }

private:
    struct Transfer {
        StationId client = 0;
        StationId server = 0;
        std::uint64_t file_bytes = 0;
        std::uint32_t segments_total = 0;
        std::uint32_t segments_issued = 0;    // handed to the MAC (accepted or rejected)
        std::uint32_t segments_resolved = 0;  // delivered or dropped
        std::uint64_t bytes_delivered = 0;
        std::uint64_t bytes_dropped = 0;
    };

    struct Client {
        RngStream rng;
        bool busy = false;  // a transfer is in flight
        explicit Client(RngStream r) : rng(std::move(r)) {}
    };

    void schedule_next_request(std::uint32_t client_index);
    void issue_request(std::uint32_t client_index);
    void start_reply(std::uint64_t transfer_id, SimTime t);
    void pump_segments(std::uint64_t transfer_id);
    void resolve_segment(std::uint64_t transfer_id, std::uint32_t bytes, bool delivered);
    void finish_transfer(std::uint64_t transfer_id);

    Engine& engine_;
    MacBus& mac_;
    Topology topo_;
    WorkloadConfig config_;
    double think_mean_s_;
    std::vector<Client> clients_;
    std::unordered_map<std::uint64_t, Transfer> inflight_;
    std::uint64_t next_transfer_id_ = 1;
    bool in_pump_ = false;
    WorkloadStats stats_;
};

}  // namespace ethersim
