#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ethersim/ethernet.hpp"
#include "ethersim/workload.hpp"

namespace ethersim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 1;
    double duration_s = 4000.0;
    double warmup_s = 100.0;
    std::uint32_t n_clients = 32;
    std::uint32_t n_servers = 2;
    EthernetParams ethernet;         // max_retx is taken from the sweep
    WorkloadConfig workload;
    std::vector<int> max_retx_sweep = {3, 6, 9};
    std::vector<double> bin_widths_s = {5.0, 10.0, 20.0};
    int seeds_per_point = 5;
    std::string output_dir = "out";

    Topology topology() const { return Topology{n_clients, n_servers}; }
    double think_mean_s() const;  // configured value, or the calibrated default
    void validate() const;        // throws ConfigError naming the violated invariant
};

// Flat "key = value" text, '#' comments, unknown keys rejected, missing keys
// defaulted.  Errors carry the line number.
ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::string& path);

}  // namespace ethersim
