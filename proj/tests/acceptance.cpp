// Acceptance suite: every criterion prints one PASS/FAIL line with the
// measured numbers; the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ethersim/config.hpp"
#include "ethersim/engine.hpp"
#include "ethersim/ethernet.hpp"
#include "ethersim/experiment.hpp"
#include "ethersim/rng.hpp"
#include "ethersim/selfsim.hpp"
#include "ethersim/trace.hpp"
#include "stat_helpers.hpp"

using namespace ethersim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report_line(int id, bool pass, const std::string& name, const std::string& detail) {
    std::printf("criterion %d: %s  %s  [%s]\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// ---- 1. white-noise estimator calibration --------------------------------

void criterion_white_noise() {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int kSeeds = 20;
    double sum = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
        sum += hurst_estimate(gen_white_noise(std::size_t{1} << 15, 1000 + s)).h;
    }
    const double mean = sum / kSeeds;
    const double secs = elapsed_s(t0);
    const bool pass = mean >= 0.47 && mean <= 0.58 && secs < 10.0;
    report_line(1, pass, "white-noise calibration",
           fmt("mean H over %d seeds = %.4f, want [0.47, 0.58]; %.2fs (< 10s)", kSeeds, mean, secs));
}

// ---- 2. fGn estimator calibration -----------------------------------------

void criterion_fgn() {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int kSeeds = 20;
    bool pass = true;
    std::string detail;
    for (double target : {0.6, 0.7, 0.8, 0.9}) {
        double sum = 0.0;
        for (int s = 0; s < kSeeds; ++s) {
            sum += hurst_estimate(gen_fgn(std::size_t{1} << 15, target, 2000 + s)).h;
        }
        const double mean = sum / kSeeds;
        pass = pass && std::abs(mean - target) <= 0.05;
        detail += fmt("H=%.1f->%.3f ", target, mean);
    }
    const double secs = elapsed_s(t0);
    pass = pass && secs < 60.0;
    report_line(2, pass, "fGn calibration (+-0.05)", detail + fmt("; %.2fs (< 60s)", secs));
}

// ---- 3. R/S brute-force equivalence ---------------------------------------

double rs_transcription(const std::vector<double>& x) {
    const std::size_t n = x.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x[i];
    mean /= static_cast<double>(n);
    double max_w = 0.0, min_w = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        double w_k = 0.0;
        for (std::size_t i = 0; i < k; ++i) w_k += x[i];
        w_k -= static_cast<double>(k) * mean;
        if (w_k > max_w) max_w = w_k;
        if (w_k < min_w) min_w = w_k;
    }
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean);
    var /= static_cast<double>(n);
    return (max_w - min_w) / std::sqrt(var);
}

void criterion_rs_oracle() {
    RngStream rng(55, "acceptance-rs");
    double worst = 0.0;
    std::size_t checked = 0;
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = 2 + rng.uniform_below(63);
        std::vector<double> x(n);
        for (double& v : x) v = rng.uniform01() * 10.0;
        worst = std::max(worst, std::abs(rs_statistic(x) - rs_transcription(x)));
        ++checked;
    }
    const double ramp = std::abs(rs_statistic(std::vector<double>{1, 2, 3, 4}) - 1.7888543819998317);
    const double alt = std::abs(rs_statistic(std::vector<double>{1, -1, 1, -1}) - 1.0);
    worst = std::max({worst, ramp, alt});
    report_line(3, worst <= 1e-12, "R/S matches the brute-force definition",
           fmt("%zu random series + 2 hand cases, worst |diff| = %.2e (<= 1e-12)", checked, worst));
}

// ---- 4 & 6. default sweep: H band, trend, conservation ---------------------

ExperimentReport run_default_sweep(double* seconds_out) {
    ExperimentConfig config;  // spec defaults
    config.output_dir = (fs::temp_directory_path() / "ethersim_acceptance_sweep").string();
    fs::remove_all(config.output_dir);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport report = run_sweep(config);
    *seconds_out = elapsed_s(t0);
    return report;
}

void criterion_table_band(const ExperimentReport& report, double sweep_seconds) {
    std::map<int, double> mean_h;
    for (const SweepPoint& p : report.summarize()) {
        if (p.bin_width_s == 5.0) mean_h[p.max_retx] = p.mean_h;
    }
    bool pass = !report.any_failed() && mean_h.size() == 3;
    std::string detail;
    for (const auto& [retx, h] : mean_h) {
        pass = pass && h >= 0.60 && h <= 0.85;
        detail += fmt("H(%d)=%.3f ", retx, h);
    }
    if (mean_h.size() == 3) pass = pass && mean_h[3] >= mean_h[9];
    pass = pass && sweep_seconds < 600.0;
    report_line(4, pass, "default sweep: H in [0.60, 0.85] at 5 s, H(3) >= H(9)",
                detail + fmt("; sweep %.1fs (< 600s)", sweep_seconds));
}

void criterion_conservation(const ExperimentReport& report) {
    bool pass = !report.runs.empty();
    std::uint64_t runs_checked = 0;
    for (const RunStats& run : report.runs) {
        if (run.failed) {
            pass = false;
            continue;
        }
        const std::uint64_t accounted =
            run.frames_delivered + run.drops_excess + run.drops_overflow + run.residual_queue;
        pass = pass && run.frames_enqueued == accounted;
        pass = pass && run.max_attempts_seen <= run.max_retx + 1;
        ++runs_checked;
    }

    // plus one deliberately hostile short run
    ExperimentConfig config;
    config.duration_s = 100;
    config.warmup_s = 10;
    config.workload.target_utilization = 0.7;
    SimulationRun hostile(config, 1, 0);
    hostile.execute();  // throws on any conservation/truncation violation
    const StationCounters t = hostile.mac().totals();
    pass = pass && t.enqueue_attempts ==
                       t.delivered + t.drops_excess + t.drops_overflow + hostile.mac().residual_frames();
    pass = pass && t.max_attempts_seen <= 2;

    report_line(6, pass, "frame conservation and attempt truncation",
           fmt("%llu sweep runs + 1 hostile run, zero violations",
               static_cast<unsigned long long>(runs_checked)));
}

// ---- 5. backoff law ---------------------------------------------------------

void criterion_backoff() {
    bool pass = true;
    std::string detail;
    for (int i : {1, 2, 3, 6, 9}) {
        RngStream rng(300 + i, "acceptance-backoff");
        const std::size_t draws = 100'000;
        const std::size_t bins = std::size_t{1} << i;
        std::vector<std::size_t> counts(bins, 0);
        for (std::size_t d = 0; d < draws; ++d) {
            const int k = backoff_slots(i, 9, 10, rng);
            if (k < 0 || static_cast<std::size_t>(k) >= bins) {
                pass = false;
                break;
            }
            counts[static_cast<std::size_t>(k)]++;
        }
        const double stat = chi_square_uniform(counts, draws);
        const double crit = chi_square_crit_001(bins - 1);
        pass = pass && stat < crit;
        detail += fmt("i=%d chi2=%.1f/%.1f ", i, stat, crit);
    }
    report_line(5, pass, "backoff confined to [0, 2^i - 1] and uniform (alpha=0.001)", detail);
}

// ---- 7. uncontended throughput ---------------------------------------------

void criterion_throughput() {
    Engine engine;
    MacBus mac(engine, EthernetParams{}, 2, 99);
    std::vector<SimTime> deliveries;
    mac.set_delivery_callback([&](const Frame&, SimTime t) { deliveries.push_back(t); });
    for (int i = 0; i < 50; ++i) {
        Frame f;
        f.src = 0;
        f.dst = 1;
        f.payload_bytes = 1024;
        mac.enqueue_frame(0, f);
    }
    engine.run_until(kTicksPerSecond);

    constexpr SimTime kPeriod = 819'200 + 9'600;
    bool pass = deliveries.size() == 50 && mac.totals().collisions == 0;
    for (std::size_t i = 0; i < deliveries.size(); ++i) {
        pass = pass && deliveries[i] == static_cast<SimTime>(i + 1) * kPeriod;
    }
    report_line(7, pass, "uncontended sender: one frame per 819.2 us + 9.6 us",
           fmt("%zu deliveries, period %lld ns, collisions %llu", deliveries.size(),
               static_cast<long long>(kPeriod),
               static_cast<unsigned long long>(mac.totals().collisions)));
}

// ---- 8. determinism ----------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream body;
        body << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = body.str();
    }
    return files;
}

ExperimentConfig determinism_config(const std::string& outdir, const std::vector<int>& sweep) {
    std::istringstream in(
        "duration_s = 420\n"
        "warmup_s = 20\n"
        "bin_widths_s = 5\n"
        "seeds_per_point = 2\n"
        "master_seed = 7\n");
    ExperimentConfig cfg = parse_config(in, "acceptance");
    cfg.max_retx_sweep = sweep;
    cfg.output_dir = outdir;
    return cfg;
}

void criterion_determinism() {
    const fs::path base = fs::temp_directory_path() / "ethersim_acceptance_det";
    fs::remove_all(base);
    const auto dir = [&base](const char* leaf) { return (base / leaf).string(); };

    run_sweep(determinism_config(dir("a"), {3, 9}));
    run_sweep(determinism_config(dir("b"), {3, 9}));
    run_sweep(determinism_config(dir("c"), {9, 3}));  // permuted sweep order

    const auto tree_a = read_tree(base / "a");
    const auto tree_b = read_tree(base / "b");
    bool pass = !tree_a.empty() && tree_a == tree_b;

    // permutation must leave every per-run artifact identical
    const auto tree_c = read_tree(base / "c");
    std::size_t per_run_files = 0;
    for (const auto& [rel, body] : tree_a) {
        if (rel.rfind("table.csv", 0) == 0 || rel.rfind("summary.txt", 0) == 0) continue;
        const auto it = tree_c.find(rel);
        pass = pass && it != tree_c.end() && it->second == body;
        ++per_run_files;
    }
    report_line(8, pass, "bit-identical reruns; sweep order irrelevant per run",
           fmt("%zu files compared across reruns, %zu across permutation", tree_a.size(), per_run_files));
    fs::remove_all(base);
}

// ---- 9. trace algebra ---------------------------------------------------------

void criterion_trace_algebra() {
    RngStream rng(77, "acceptance-trace");
    bool pass = true;
    for (int round = 0; round < 1000 && pass; ++round) {
        DeliveryLog log;
        SimTime t = 0;
        const int n = static_cast<int>(rng.uniform_below(500));
        for (int i = 0; i < n; ++i) {
            t += static_cast<SimTime>(rng.uniform_below(150'000'000));
            log.record(t, rng.uniform_below(4000) + 1);
        }
        const SimTime w = static_cast<SimTime>(rng.uniform_below(kTicksPerSecond)) + 1;
        const std::uint64_t factor = rng.uniform_below(8) + 1;
        const SimTime start = static_cast<SimTime>(rng.uniform_below(kTicksPerSecond));
        const SimTime end = start + static_cast<SimTime>(rng.uniform_below(40 * kTicksPerSecond));

        const TrafficTrace fine = aggregate(log, w, start, end);
        const TrafficTrace coarse = aggregate(log, w * static_cast<SimTime>(factor), start, end);
        const TrafficTrace rescaled = rescale(fine, factor);

        const std::size_t common = std::min(coarse.bins.size(), rescaled.bins.size());
        for (std::size_t j = 0; j < common; ++j) pass = pass && coarse.bins[j] == rescaled.bins[j];
        pass = pass && rescaled.total_bytes() <= fine.total_bytes();
        if (factor != 0 && fine.bins.size() % factor == 0) {
            pass = pass && rescaled.total_bytes() == fine.total_bytes();
        }
    }
    report_line(9, pass, "aggregate/rescale commute; bytes conserved", "1000 randomized delivery logs");
}

}  // namespace

int main() {
    criterion_white_noise();
    criterion_fgn();
    criterion_rs_oracle();

    double sweep_seconds = 0.0;
    const ExperimentReport sweep_report = run_default_sweep(&sweep_seconds);
    criterion_table_band(sweep_report, sweep_seconds);
    criterion_backoff();
    criterion_conservation(sweep_report);
    criterion_throughput();
    criterion_determinism();
    criterion_trace_algebra();

    if (g_failures == 0) {
        std::printf("acceptance: 9/9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
