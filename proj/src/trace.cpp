#include "ethersim/trace.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ethersim {

void DeliveryLog::record(SimTime t, std::uint64_t bytes) {
    if (!records_.empty() && t < records_.back().first) {
        throw std::logic_error("DeliveryLog: out-of-order delivery time");
    }
    records_.emplace_back(t, bytes);
}

std::uint64_t TrafficTrace::total_bytes() const {
    std::uint64_t sum = 0;
    for (std::uint64_t b : bins) sum += b;
    return sum;
}

TrafficTrace aggregate(const DeliveryLog& log, SimTime bin_width, SimTime start, SimTime end) {
    if (bin_width <= 0) throw std::invalid_argument("aggregate: bin_width must be > 0");
    TrafficTrace trace;
    trace.bin_width = bin_width;
    trace.start = start;
    if (end <= start) return trace;  // empty interval, zero-length trace

    const std::uint64_t n_bins = static_cast<std::uint64_t>((end - start) / bin_width);
    trace.bins.assign(n_bins, 0);
    if (n_bins == 0) return trace;

    const SimTime covered_end = start + static_cast<SimTime>(n_bins) * bin_width;
    for (const auto& [t, bytes] : log.records()) {
        if (t < start || t >= covered_end) continue;
        trace.bins[static_cast<std::size_t>((t - start) / bin_width)] += bytes;
    }
    return trace;
}

TrafficTrace rescale(const TrafficTrace& trace, std::uint64_t factor) {
    if (factor < 1) throw std::invalid_argument("rescale: factor must be >= 1");
    TrafficTrace out;
    out.bin_width = trace.bin_width * static_cast<SimTime>(factor);
    out.start = trace.start;
    const std::uint64_t n_out = trace.bins.size() / factor;
    out.bins.reserve(n_out);
    for (std::uint64_t j = 0; j < n_out; ++j) {
        std::uint64_t sum = 0;
        for (std::uint64_t k = 0; k < factor; ++k) sum += trace.bins[j * factor + k];
        out.bins.push_back(sum);
    }
    return out;
}

void write_trace_csv(const TrafficTrace& trace, std::ostream& out) {
    out << "bin_start_s,bytes\n";
    char buf[64];
    for (std::size_t j = 0; j < trace.bins.size(); ++j) {
        const double bin_start_s = to_seconds(trace.start + static_cast<SimTime>(j) * trace.bin_width);
        std::snprintf(buf, sizeof buf, "%.6f", bin_start_s);
        out << buf << ',' << trace.bins[j] << '\n';
    }
}

TrafficTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace csv: empty input");
    if (line.rfind("bin_start_s,bytes", 0) != 0) {
        throw std::runtime_error("trace csv: expected header 'bin_start_s,bytes'");
    }
    TrafficTrace trace;
    double first_start = 0.0, second_start = 0.0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("trace csv: missing comma in row");
        const double start_s = std::stod(line.substr(0, comma));
        const std::uint64_t bytes = std::stoull(line.substr(comma + 1));
        if (row == 0) first_start = start_s;
        if (row == 1) second_start = start_s;
        trace.bins.push_back(bytes);
        ++row;
    }
    trace.start = from_seconds(first_start);
    trace.bin_width = row >= 2 ? from_seconds(second_start - first_start) : kTicksPerSecond;
    return trace;
}

}  // namespace ethersim
