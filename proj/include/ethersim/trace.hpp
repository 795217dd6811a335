#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "ethersim/sim_time.hpp"

namespace ethersim {

// Time-ordered (completion time, bytes) records of everything the MAC put on
// the wire successfully.
class DeliveryLog {
public:
    void record(SimTime t, std::uint64_t bytes);  // throws on out-of-order time

    const std::vector<std::pair<SimTime, std::uint64_t>>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

private:
    std::vector<std::pair<SimTime, std::uint64_t>> records_;
};

// Bytes delivered per fixed-width bin over [start, start + bins.size() * bin_width).
struct TrafficTrace {
    SimTime bin_width = 0;
    SimTime start = 0;
    std::vector<std::uint64_t> bins;

    std::uint64_t total_bytes() const;
};

// Bins deliveries into half-open intervals [start + j*w, start + (j+1)*w);
// the trailing partial bin is discarded.  An empty interval yields a
// zero-length trace.
TrafficTrace aggregate(const DeliveryLog& log, SimTime bin_width, SimTime start, SimTime end);

// Coarsens a trace by summing groups of `factor` consecutive bins; the
// trailing remainder is discarded.  factor above the bin count yields an
// empty trace.
TrafficTrace rescale(const TrafficTrace& trace, std::uint64_t factor);

// CSV with header "bin_start_s,bytes", one row per bin.
void write_trace_csv(const TrafficTrace& trace, std::ostream& out);
TrafficTrace read_trace_csv(std::istream& in);  // throws on malformed input

}  // namespace ethersim
