#include "ethersim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ethersim {

void Topology::validate() const {
    if (n_clients < 1) throw std::invalid_argument("n_clients must be >= 1");
    if (n_servers < 1) throw std::invalid_argument("n_servers must be >= 1");
}

double DistSpec::sample(RngStream& rng) const {
    switch (kind) {
        case Kind::Constant:
            return mean;
        case Kind::Exponential:
            return rng.exponential(mean);
        case Kind::Pareto: {
            // x_min chosen so the distribution has the requested mean.
            const double x_min = mean * (shape - 1.0) / shape;
            return x_min * std::pow(1.0 - rng.uniform01(), -1.0 / shape);
        }
    }
    throw std::logic_error("DistSpec: unknown kind");
}

void DistSpec::validate(const std::string& what) const {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument(what + ": mean must be finite and non-negative");
    }
    if (kind != Kind::Constant && !(mean > 0.0)) {
        throw std::invalid_argument(what + ": mean must be > 0");
    }
    if (kind == Kind::Pareto && !(shape > 1.0)) {
        throw std::invalid_argument(what + ": pareto shape must be > 1 for a finite mean");
    }
}

DistSpec DistSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    DistSpec spec;
    if (kind == "constant") {
        spec.kind = Kind::Constant;
    } else if (kind == "exponential") {
        spec.kind = Kind::Exponential;
    } else if (kind == "pareto") {
        spec.kind = Kind::Pareto;
    } else {
        throw std::invalid_argument("unknown distribution '" + kind +
                                    "' (expected constant | exponential | pareto)");
    }
    if (!(in >> spec.mean)) throw std::invalid_argument("distribution '" + kind + "' needs a mean");
    if (spec.kind == Kind::Pareto) {
        if (!(in >> spec.shape)) spec.shape = 1.5;
    }
    std::string extra;
    if (in >> extra) throw std::invalid_argument("trailing token '" + extra + "' in distribution spec");
    return spec;
}

std::string DistSpec::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Constant: out << "constant " << mean; break;
        case Kind::Exponential: out << "exponential " << mean; break;
        case Kind::Pareto: out << "pareto " << mean << " " << shape; break;
    }
    return out.str();
}

void WorkloadConfig::validate() const {
    file_size.validate("file_size_dist");
    if (!(file_size.mean >= 1.0)) throw std::invalid_argument("file_size_dist: mean must be >= 1 byte");
    if (think_time) think_time->validate("think_time_dist");
    if (!(target_utilization > 0.0 && target_utilization < 1.0)) {
        throw std::invalid_argument("target_utilization must be in (0, 1)");
    }
}

double calibrated_think_mean_s(const Topology& topo, const EthernetParams& ether,
                               double mean_file_bytes, double target_utilization) {
    // Each client cycle carries mean_file_bytes * 8 bits; the aggregate rate
    // of n_clients cycles should be target_utilization * bandwidth.  The
    // think time is what remains of the cycle after uncontended service.
    const double file_bits = mean_file_bytes * 8.0;
    const double cycle_s = topo.n_clients * file_bits / (target_utilization * static_cast<double>(ether.bandwidth_bps));
    const double frames_per_file = std::ceil(mean_file_bytes / static_cast<double>(kDataFrameBytes));
    const double service_s =
        frames_per_file * to_seconds(ether.frame_duration(kDataFrameBytes) + ether.ifg) +
        to_seconds(ether.frame_duration(kRequestFrameBytes) + ether.ifg);
    return std::max(1e-3, cycle_s - service_s);
}

std::vector<std::uint32_t> segment_file(std::uint64_t file_bytes) {
    if (file_bytes < 1) throw std::invalid_argument("segment_file: file_bytes must be >= 1");
    std::vector<std::uint32_t> payloads(file_bytes / kDataFrameBytes, kDataFrameBytes);
    const std::uint32_t remainder = static_cast<std::uint32_t>(file_bytes % kDataFrameBytes);
    if (remainder != 0) payloads.push_back(remainder);
    return payloads;
}

Workload::Workload(Engine& engine, MacBus& mac, Topology topo, WorkloadConfig config,
                   double think_mean_s, std::uint64_t master_seed)
    : engine_(engine), mac_(mac), topo_(topo), config_(config), think_mean_s_(think_mean_s) {
    topo_.validate();
    config_.validate();
    clients_.reserve(topo_.n_clients);
    for (std::uint32_t i = 0; i < topo_.n_clients; ++i) {
        clients_.emplace_back(RngStream(master_seed, "client-" + std::to_string(i)));
    }
}

void Workload::start() {
    for (std::uint32_t i = 0; i < topo_.n_clients; ++i) schedule_next_request(i);
}

void Workload::schedule_next_request(std::uint32_t client_index) {
    Client& client = clients_[client_index];
    double think_s;
    if (config_.think_time) {
        think_s = config_.think_time->sample(client.rng);
    } else {
        think_s = client.rng.exponential(think_mean_s_);
    }
    engine_.schedule_in(from_seconds(think_s), [this, client_index] { issue_request(client_index); });
}

void Workload::issue_request(std::uint32_t client_index) {
    Client& client = clients_[client_index];
    if (client.busy) throw std::logic_error("client already has a transfer in flight");
    client.busy = true;

    const StationId server = topo_.server(static_cast<std::uint32_t>(client.rng.uniform_below(topo_.n_servers)));
    const std::uint64_t file_bytes =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(config_.file_size.sample(client.rng))));

    const std::uint64_t id = next_transfer_id_++;
    Transfer transfer;
    transfer.client = static_cast<StationId>(client_index);
    transfer.server = server;
    transfer.file_bytes = file_bytes;
    inflight_.emplace(id, transfer);
    stats_.transfers_started++;
    stats_.file_bytes_offered += file_bytes;

    Frame request;
    request.src = static_cast<StationId>(client_index);
    request.dst = server;
    request.payload_bytes = kRequestFrameBytes;
    request.transfer_id = id;
    request.kind = FrameKind::Request;
    // A full client queue rejects the request synchronously; that surfaces
    // through the MAC drop callback, which ends the transfer.
    mac_.enqueue_frame(request.src, request);
}

void Workload::start_reply(std::uint64_t transfer_id, SimTime) {
    Transfer& transfer = inflight_.at(transfer_id);
    transfer.segments_total =
        static_cast<std::uint32_t>((transfer.file_bytes + kDataFrameBytes - 1) / kDataFrameBytes);
    pump_segments(transfer_id);
}

// Streams the reply with a bounded per-transfer window.  Segments rejected
// by a full server queue come back synchronously through the MAC drop
// callback and are resolved there, which can finish the transfer and erase
// it from the map, so the entry is re-looked-up every iteration.
void Workload::pump_segments(std::uint64_t transfer_id) {
    if (in_pump_) return;  // the active pump loop picks the work up
    in_pump_ = true;
    for (;;) {
        auto it = inflight_.find(transfer_id);
        if (it == inflight_.end()) break;
        Transfer& transfer = it->second;
        if (transfer.segments_issued == transfer.segments_total) break;
        const std::uint32_t in_flight = transfer.segments_issued - transfer.segments_resolved;
        if (in_flight >= kServerWindowFrames) break;

        const std::uint32_t index = transfer.segments_issued++;
        const std::uint64_t tail = transfer.file_bytes - static_cast<std::uint64_t>(index) * kDataFrameBytes;
        Frame seg;
        seg.src = transfer.server;
        seg.dst = transfer.client;
        seg.payload_bytes = static_cast<std::uint32_t>(std::min<std::uint64_t>(tail, kDataFrameBytes));
        seg.transfer_id = transfer_id;
        seg.kind = FrameKind::Data;
        if (!mac_.enqueue_frame(seg.src, seg)) {
            // Queue full.  If some of our segments are still in flight their
            // resolution will pump again; only a transfer with nothing left
            // in flight keeps issuing (and shedding) here.
            auto again = inflight_.find(transfer_id);
            if (again == inflight_.end()) break;
            if (again->second.segments_issued != again->second.segments_resolved) break;
        }
    }
    in_pump_ = false;
}

void Workload::handle_delivery(const Frame& frame, SimTime t) {
    auto it = inflight_.find(frame.transfer_id);
    if (it == inflight_.end()) return;  // not ours (or already finished)
    if (frame.kind == FrameKind::Request) {
        start_reply(frame.transfer_id, t);
    } else {
        resolve_segment(frame.transfer_id, frame.payload_bytes, true);
    }
}

void Workload::handle_drop(const Frame& frame, DropReason, SimTime) {
    auto it = inflight_.find(frame.transfer_id);
    if (it == inflight_.end()) return;
    if (frame.kind == FrameKind::Request) {
        // The server never heard about the transfer; the client moves on.
        stats_.transfers_failed_request++;
        const std::uint32_t client_index = it->second.client;
        inflight_.erase(it);
        clients_[client_index].busy = false;
        schedule_next_request(client_index);
    } else {
        resolve_segment(frame.transfer_id, frame.payload_bytes, false);
    }
}

void Workload::resolve_segment(std::uint64_t transfer_id, std::uint32_t bytes, bool delivered) {
    auto it = inflight_.find(transfer_id);
    if (it == inflight_.end()) return;
    Transfer& transfer = it->second;
    transfer.segments_resolved++;
    if (delivered) {
        transfer.bytes_delivered += bytes;
        stats_.file_bytes_delivered += bytes;
    } else {
        transfer.bytes_dropped += bytes;
        stats_.file_bytes_dropped += bytes;
    }
    if (transfer.segments_resolved == transfer.segments_total) {
        finish_transfer(transfer_id);
    } else {
        pump_segments(transfer_id);
    }
}

void Workload::finish_transfer(std::uint64_t transfer_id) {
    auto it = inflight_.find(transfer_id);
    Transfer& transfer = it->second;
    if (transfer.bytes_delivered + transfer.bytes_dropped != transfer.file_bytes) {
        throw std::logic_error("transfer byte accounting violated");
    }
    const std::uint32_t client_index = transfer.client;
    inflight_.erase(it);
    stats_.transfers_completed++;
    clients_[client_index].busy = false;
    schedule_next_request(client_index);
}

}  // namespace ethersim
