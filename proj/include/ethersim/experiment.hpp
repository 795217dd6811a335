#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ethersim/config.hpp"
#include "ethersim/selfsim.hpp"
#include "ethersim/trace.hpp"
#include "ethersim/workload.hpp"

namespace ethersim {

// Seed for one sweep point, independent of execution order.
std::uint64_t derive_run_seed(std::uint64_t master_seed, int max_retx, int seed_index);

// One self-contained simulation instance: engine + bus + workload + log.
class SimulationRun {
public:
    SimulationRun(const ExperimentConfig& config, int max_retx, int seed_index);
    ~SimulationRun();

    SimulationRun(const SimulationRun&) = delete;
    SimulationRun& operator=(const SimulationRun&) = delete;

    void execute();  // runs to duration_s and verifies frame conservation

    const DeliveryLog& delivery_log() const;
    const MacBus& mac() const;
    const Workload& workload() const;
    double utilization() const;  // busy fraction over [warmup, duration)
    TrafficTrace trace_at(double bin_width_s) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct WidthEstimate {
    double bin_width_s = 0.0;
    HurstEstimate estimate;
};

struct RunStats {
    int max_retx = 0;
    int seed_index = 0;
    bool failed = false;
    std::string error;

    std::uint64_t frames_enqueued = 0;  // includes overflow-rejected attempts
    std::uint64_t frames_delivered = 0;
    std::uint64_t drops_excess = 0;
    std::uint64_t drops_overflow = 0;
    std::uint64_t residual_queue = 0;
    std::uint64_t collisions = 0;
    std::uint64_t bytes_delivered = 0;
    int max_attempts_seen = 0;
    double utilization = 0.0;
    std::vector<WidthEstimate> estimates;

    double h_at(double bin_width_s) const;  // throws if the width is absent
};

struct SweepPoint {
    int max_retx = 0;
    double bin_width_s = 0.0;
    double mean_h = 0.0;
    double sd_h = 0.0;
    int n_seeds = 0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunStats> runs;  // ordered by (sweep order, seed index)

    std::vector<SweepPoint> summarize() const;  // one row per (max_retx, width)
    bool any_failed() const;
};

// Runs every (max_retx, seed) point and writes the per-run artifacts,
// panels/, pox/, table.csv and summary.txt under config.output_dir.
// Per-run failures are recorded in the report; the sweep continues.
ExperimentReport run_sweep(const ExperimentConfig& config);

void emit_table(const ExperimentReport& report, const std::string& path);
void emit_figure_data(const ExperimentReport& report, const std::string& dir);
void write_summary(const ExperimentReport& report, const std::string& path);

}  // namespace ethersim
