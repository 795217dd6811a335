#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ethersim/config.hpp"
#include "ethersim/ethernet.hpp"
#include "ethersim/experiment.hpp"
#include "ethersim/rng.hpp"
#include "ethersim/selfsim.hpp"
#include "ethersim/trace.hpp"
#include "ethersim/workload.hpp"

namespace py = pybind11;
using namespace ethersim;

namespace {

// A finished single-run simulation, kept alive so traces at several bin
// widths can be pulled from the same delivery log.
class SimResult {
public:
    SimResult(const ExperimentConfig& config, int max_retx, int seed_index)
        : run_(std::make_unique<SimulationRun>(config, max_retx, seed_index)) {
        run_->execute();
    }

    std::uint64_t frames_enqueued() const { return run_->mac().totals().enqueue_attempts; }
    std::uint64_t frames_delivered() const { return run_->mac().totals().delivered; }
    std::uint64_t drops_excess() const { return run_->mac().totals().drops_excess; }
    std::uint64_t drops_overflow() const { return run_->mac().totals().drops_overflow; }
    std::uint64_t residual_queue() const { return run_->mac().residual_frames(); }
    std::uint64_t collisions() const { return run_->mac().totals().collisions; }
    std::uint64_t bytes_delivered() const { return run_->mac().totals().bytes_delivered; }
    int max_attempts_seen() const { return run_->mac().totals().max_attempts_seen; }
    double utilization() const { return run_->utilization(); }
    std::size_t deliveries() const { return run_->delivery_log().size(); }

    std::vector<std::uint64_t> trace(double bin_width_s) const {
        return run_->trace_at(bin_width_s).bins;
    }

    double hurst(double bin_width_s) const {
        const TrafficTrace t = run_->trace_at(bin_width_s);
        Series series(t.bins.begin(), t.bins.end());
        return hurst_estimate(series).h;
    }

private:
    std::unique_ptr<SimulationRun> run_;
};

SimResult run_simulation(int max_retx, double duration_s, std::uint64_t seed, double warmup_s,
                         std::uint32_t n_clients, std::uint32_t n_servers, double target_utilization) {
    ExperimentConfig config;
    config.master_seed = seed;
    config.duration_s = duration_s;
    config.warmup_s = warmup_s;
    config.n_clients = n_clients;
    config.n_servers = n_servers;
    config.workload.target_utilization = target_utilization;
    config.max_retx_sweep = {max_retx};
    config.validate();
    return SimResult(config, max_retx, 0);
}

std::vector<int> sample_backoff(int attempt_i, int max_retx, int exponent_cap, std::size_t draws,
                                std::uint64_t seed) {
    RngStream rng(seed, "backoff-sample");
    std::vector<int> out;
    out.reserve(draws);
    for (std::size_t i = 0; i < draws; ++i) {
        out.push_back(backoff_slots(attempt_i, max_retx, exponent_cap, rng));
    }
    return out;
}

std::vector<std::uint64_t> aggregate_py(const std::vector<double>& times_s,
                                        const std::vector<std::uint64_t>& bytes, double bin_width_s,
                                        double start_s, double end_s) {
    if (times_s.size() != bytes.size()) {
        throw std::invalid_argument("times and bytes must have the same length");
    }
    DeliveryLog log;
    for (std::size_t i = 0; i < times_s.size(); ++i) {
        log.record(from_seconds(times_s[i]), bytes[i]);
    }
    return aggregate(log, from_seconds(bin_width_s), from_seconds(start_s), from_seconds(end_s)).bins;
}

std::vector<std::uint64_t> rescale_py(const std::vector<std::uint64_t>& bins, std::uint64_t factor) {
    TrafficTrace trace;
    trace.bin_width = 1;
    trace.bins = bins;
    return rescale(trace, factor).bins;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "CSMA/CD collision-domain simulator with R/S Hurst analysis";

    py::class_<RSPoint>(m, "RSPoint")
        .def_readonly("n", &RSPoint::n)
        .def_readonly("mean_rs", &RSPoint::mean_rs)
        .def("__repr__", [](const RSPoint& p) {
            return "RSPoint(n=" + std::to_string(p.n) + ", mean_rs=" + std::to_string(p.mean_rs) + ")";
        });

    py::class_<HurstEstimate>(m, "HurstEstimate")
        .def_readonly("h", &HurstEstimate::h)
        .def_readonly("c", &HurstEstimate::c)
        .def_readonly("r_squared", &HurstEstimate::r_squared)
        .def_readonly("points", &HurstEstimate::points)
        .def("__repr__", [](const HurstEstimate& e) {
            return "HurstEstimate(h=" + std::to_string(e.h) + ", r_squared=" + std::to_string(e.r_squared) + ")";
        });

    m.def("rs_statistic", [](const Series& s) { return rs_statistic(s); },
          py::arg("series"), "Rescaled adjusted range R/S of one series.");

    m.def(
        "pox_points",
        [](const Series& s, const std::vector<std::size_t>& blocks) {
            return blocks.empty() ? pox_points(s, default_block_lengths(s.size())) : pox_points(s, blocks);
        },
        py::arg("series"), py::arg("block_lengths") = std::vector<std::size_t>{},
        "Mean R/S per block length (default: ~12 log-spaced lengths).");

    m.def(
        "hurst_estimate",
        [](const Series& s, const std::vector<std::size_t>& blocks) {
            return blocks.empty() ? hurst_estimate(s) : hurst_estimate(s, blocks);
        },
        py::arg("series"), py::arg("block_lengths") = std::vector<std::size_t>{},
        "Log-log R/S regression; .h is the Hurst estimate.");

    m.def("gen_white_noise", &gen_white_noise, py::arg("n"), py::arg("seed"),
          "IID standard Gaussian series, deterministic in the seed.");

    m.def("gen_fgn", &gen_fgn, py::arg("n"), py::arg("h_target"), py::arg("seed"),
          "Fractional Gaussian noise via circulant embedding; n must be a power of two.");

    m.def("segment_file", &segment_file, py::arg("file_bytes"),
          "Split a file into 1 KB payloads plus a remainder frame.");

    m.def("sample_backoff", &sample_backoff, py::arg("attempt_i"), py::arg("max_retx") = 16,
          py::arg("exponent_cap") = 10, py::arg("draws") = 1, py::arg("seed") = 1,
          "Draws of the binary-exponential-backoff slot count.");

    m.def("aggregate", &aggregate_py, py::arg("times_s"), py::arg("bytes"), py::arg("bin_width_s"),
          py::arg("start_s"), py::arg("end_s"), "Bin deliveries into bytes-per-interval counts.");

    m.def("rescale", &rescale_py, py::arg("bins"), py::arg("factor"),
          "Sum groups of `factor` consecutive bins.");

    py::class_<SimResult>(m, "SimResult")
        .def_property_readonly("frames_enqueued", &SimResult::frames_enqueued)
        .def_property_readonly("frames_delivered", &SimResult::frames_delivered)
        .def_property_readonly("drops_excess", &SimResult::drops_excess)
        .def_property_readonly("drops_overflow", &SimResult::drops_overflow)
        .def_property_readonly("residual_queue", &SimResult::residual_queue)
        .def_property_readonly("collisions", &SimResult::collisions)
        .def_property_readonly("bytes_delivered", &SimResult::bytes_delivered)
        .def_property_readonly("max_attempts_seen", &SimResult::max_attempts_seen)
        .def_property_readonly("utilization", &SimResult::utilization)
        .def_property_readonly("deliveries", &SimResult::deliveries)
        .def("trace", &SimResult::trace, py::arg("bin_width_s"))
        .def("hurst", &SimResult::hurst, py::arg("bin_width_s"));

    m.def("run_simulation", &run_simulation, py::arg("max_retx"), py::arg("duration_s") = 200.0,
          py::arg("seed") = 1, py::arg("warmup_s") = 10.0, py::arg("n_clients") = 32,
          py::arg("n_servers") = 2, py::arg("target_utilization") = 0.4,
          "Run one collision-domain simulation and return its counters and traces.");
}
