#include "ethersim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ethersim/engine.hpp"

namespace fs = std::filesystem;

namespace ethersim {

namespace {

std::string format_width(double w) {
    // Stable label for file names: 5 -> "5", 0.5 -> "0.5".
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", w);
    return buf;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write to " + path.string());
    return out;
}

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t master_seed, int max_retx, int seed_index) {
    const std::uint64_t a = mix_seed(master_seed, 0x72657478ULL ^ static_cast<std::uint64_t>(max_retx));
    return mix_seed(a, 0x73656564ULL ^ static_cast<std::uint64_t>(seed_index));
}

struct SimulationRun::Impl {
    ExperimentConfig config;
    int max_retx;
    int seed_index;
    Engine engine;
    MacBus mac;
    Workload workload;
    DeliveryLog log;
    SimTime warmup_busy = 0;
    bool executed = false;

    Impl(const ExperimentConfig& cfg, int retx, int seed)
        : config(cfg),
          max_retx(retx),
          seed_index(seed),
          engine(),
          mac(engine, make_params(cfg, retx), cfg.topology().n_stations(),
              derive_run_seed(cfg.master_seed, retx, seed)),
          workload(engine, mac, cfg.topology(), cfg.workload, cfg.think_mean_s(),
                   derive_run_seed(cfg.master_seed, retx, seed)) {}

    static EthernetParams make_params(const ExperimentConfig& cfg, int retx) {
        EthernetParams p = cfg.ethernet;
        p.max_retx = retx;
        return p;
    }
};

SimulationRun::SimulationRun(const ExperimentConfig& config, int max_retx, int seed_index)
    : impl_(std::make_unique<Impl>(config, max_retx, seed_index)) {}

SimulationRun::~SimulationRun() = default;

void SimulationRun::execute() {
    Impl& im = *impl_;
    if (im.executed) throw std::logic_error("SimulationRun: already executed");
    im.executed = true;

    Impl* im_ptr = impl_.get();
    im.mac.set_delivery_callback([im_ptr](const Frame& f, SimTime t) {
        im_ptr->log.record(t, f.payload_bytes);
        im_ptr->workload.handle_delivery(f, t);
    });
    im.mac.set_drop_callback([im_ptr](const Frame& f, DropReason r, SimTime t) {
        im_ptr->workload.handle_drop(f, r, t);
    });

    const SimTime warmup = from_seconds(im.config.warmup_s);
    im.engine.schedule_at(warmup, [im_ptr] { im_ptr->warmup_busy = im_ptr->mac.busy_time(); });

    im.workload.start();
    im.engine.run_until(from_seconds(im.config.duration_s));
    im.mac.check_conservation();
}

const DeliveryLog& SimulationRun::delivery_log() const { return impl_->log; }
const MacBus& SimulationRun::mac() const { return impl_->mac; }
const Workload& SimulationRun::workload() const { return impl_->workload; }

double SimulationRun::utilization() const {
    const SimTime span = from_seconds(impl_->config.duration_s) - from_seconds(impl_->config.warmup_s);
    if (span <= 0) return 0.0;
    return static_cast<double>(impl_->mac.busy_time() - impl_->warmup_busy) / static_cast<double>(span);
}

TrafficTrace SimulationRun::trace_at(double bin_width_s) const {
    return aggregate(impl_->log, from_seconds(bin_width_s), from_seconds(impl_->config.warmup_s),
                     from_seconds(impl_->config.duration_s));
}

double RunStats::h_at(double bin_width_s) const {
    for (const WidthEstimate& e : estimates) {
        if (e.bin_width_s == bin_width_s) return e.estimate.h;
    }
    throw std::invalid_argument("no estimate at the requested bin width");
}

std::vector<SweepPoint> ExperimentReport::summarize() const {
    std::vector<SweepPoint> points;
    for (int retx : config.max_retx_sweep) {
        for (double width : config.bin_widths_s) {
            SweepPoint p;
            p.max_retx = retx;
            p.bin_width_s = width;
            std::vector<double> hs;
            for (const RunStats& run : runs) {
                if (run.max_retx != retx || run.failed) continue;
                hs.push_back(run.h_at(width));
            }
            p.n_seeds = static_cast<int>(hs.size());
            if (!hs.empty()) {
                double sum = 0.0;
                for (double h : hs) sum += h;
                p.mean_h = sum / static_cast<double>(hs.size());
                double sq = 0.0;
                for (double h : hs) sq += (h - p.mean_h) * (h - p.mean_h);
                p.sd_h = hs.size() > 1 ? std::sqrt(sq / static_cast<double>(hs.size() - 1)) : 0.0;
            }
            points.push_back(p);
        }
    }
    return points;
}

bool ExperimentReport::any_failed() const {
    for (const RunStats& run : runs) {
        if (run.failed) return true;
    }
    return false;
}

namespace {

RunStats execute_point(const ExperimentConfig& config, int retx, int seed_index, const fs::path& run_dir) {
    RunStats stats;
    stats.max_retx = retx;
    stats.seed_index = seed_index;

    SimulationRun run(config, retx, seed_index);
    run.execute();

    const StationCounters totals = run.mac().totals();
    stats.frames_enqueued = totals.enqueue_attempts;
    stats.frames_delivered = totals.delivered;
    stats.drops_excess = totals.drops_excess;
    stats.drops_overflow = totals.drops_overflow;
    stats.residual_queue = run.mac().residual_frames();
    stats.collisions = totals.collisions;
    stats.bytes_delivered = totals.bytes_delivered;
    stats.max_attempts_seen = totals.max_attempts_seen;
    stats.utilization = run.utilization();

    fs::create_directories(run_dir);
    for (double width : config.bin_widths_s) {
        const TrafficTrace trace = run.trace_at(width);
        {
            auto out = open_out(run_dir / ("trace_" + format_width(width) + ".csv"));
            write_trace_csv(trace, out);
        }
        Series series(trace.bins.begin(), trace.bins.end());
        WidthEstimate we;
        we.bin_width_s = width;
        we.estimate = hurst_estimate(series);
        stats.estimates.push_back(std::move(we));
    }

    auto out = open_out(run_dir / "stats.txt");
    out << "max_retx=" << retx << "\n";
    out << "seed_index=" << seed_index << "\n";
    out << "frames_enqueued=" << stats.frames_enqueued << "\n";
    out << "frames_delivered=" << stats.frames_delivered << "\n";
    out << "drops_excess=" << stats.drops_excess << "\n";
    out << "drops_overflow=" << stats.drops_overflow << "\n";
    out << "residual_queue=" << stats.residual_queue << "\n";
    out << "collisions=" << stats.collisions << "\n";
    out << "bytes_delivered=" << stats.bytes_delivered << "\n";
    out << "max_attempts_seen=" << stats.max_attempts_seen << "\n";
    out << "utilization=" << format_double(stats.utilization) << "\n";
    for (const WidthEstimate& we : stats.estimates) {
        out << "H_" << format_width(we.bin_width_s) << "=" << format_double(we.estimate.h) << "\n";
        out << "r2_" << format_width(we.bin_width_s) << "=" << format_double(we.estimate.r_squared) << "\n";
    }
    return stats;
}

void write_pox_csv(const HurstEstimate& est, const fs::path& path) {
    auto out = open_out(path);
    out << "n,mean_rs\n";
    for (const RSPoint& p : est.points) {
        out << p.n << ',' << format_double(p.mean_rs) << '\n';
    }
}

}  // namespace

ExperimentReport run_sweep(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.config = config;

    const fs::path root(config.output_dir);
    fs::create_directories(root);
    fs::create_directories(root / "panels");
    fs::create_directories(root / "pox");

    for (int retx : config.max_retx_sweep) {
        for (int seed = 0; seed < config.seeds_per_point; ++seed) {
            const fs::path run_dir = root / std::to_string(retx) / std::to_string(seed);
            RunStats stats;
            try {
                stats = execute_point(config, retx, seed, run_dir);
            } catch (const std::exception& e) {
                stats = RunStats{};
                stats.max_retx = retx;
                stats.seed_index = seed;
                stats.failed = true;
                stats.error = e.what();
            }
            if (!stats.failed) {
                for (const WidthEstimate& we : stats.estimates) {
                    write_pox_csv(we.estimate,
                                  root / "pox" /
                                      (std::to_string(retx) + "_" + std::to_string(seed) + "_" +
                                       format_width(we.bin_width_s) + ".csv"));
                }
                if (seed == 0) {
                    for (double width : config.bin_widths_s) {
                        fs::copy_file(run_dir / ("trace_" + format_width(width) + ".csv"),
                                      root / "panels" /
                                          (std::to_string(retx) + "_" + format_width(width) + ".csv"),
                                      fs::copy_options::overwrite_existing);
                    }
                }
            }
            report.runs.push_back(std::move(stats));
        }
    }

    emit_table(report, (root / "table.csv").string());
    write_summary(report, (root / "summary.txt").string());
    return report;
}

void emit_table(const ExperimentReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "max_retx,bin_width_s,mean_H,sd_H,n_seeds\n";
    for (const SweepPoint& p : report.summarize()) {
        out << p.max_retx << ',' << format_width(p.bin_width_s) << ',' << format_double(p.mean_h) << ','
            << format_double(p.sd_h) << ',' << p.n_seeds << '\n';
    }
}

void emit_figure_data(const ExperimentReport& report, const std::string& dir) {
    // Panels are written during the sweep; this re-exports them from the
    // per-run traces when a caller wants them in a different directory.
    const fs::path root(report.config.output_dir);
    const fs::path target(dir);
    fs::create_directories(target);
    for (int retx : report.config.max_retx_sweep) {
        for (double width : report.config.bin_widths_s) {
            const fs::path src = root / std::to_string(retx) / "0" / ("trace_" + format_width(width) + ".csv");
            if (fs::exists(src)) {
                fs::copy_file(src, target / (std::to_string(retx) + "_" + format_width(width) + ".csv"),
                              fs::copy_options::overwrite_existing);
            }
        }
    }
}

void write_summary(const ExperimentReport& report, const std::string& path) {
    auto out = open_out(path);
    const ExperimentConfig& cfg = report.config;
    out << "master_seed=" << cfg.master_seed << "\n";
    out << "duration_s=" << format_double(cfg.duration_s) << "\n";
    out << "warmup_s=" << format_double(cfg.warmup_s) << "\n";
    out << "n_clients=" << cfg.n_clients << "\n";
    out << "n_servers=" << cfg.n_servers << "\n";
    out << "seeds_per_point=" << cfg.seeds_per_point << "\n";
    out << "think_mean_s=" << format_double(cfg.think_mean_s()) << "\n";
    out << "runs_total=" << report.runs.size() << "\n";
    std::size_t failed = 0;
    for (const RunStats& run : report.runs) {
        if (run.failed) ++failed;
    }
    out << "runs_failed=" << failed << "\n";
    for (const SweepPoint& p : report.summarize()) {
        const std::string tag = std::to_string(p.max_retx) + "_" + format_width(p.bin_width_s);
        out << "mean_H_" << tag << "=" << format_double(p.mean_h) << "\n";
        out << "sd_H_" << tag << "=" << format_double(p.sd_h) << "\n";
    }
    for (const RunStats& run : report.runs) {
        const std::string tag = std::to_string(run.max_retx) + "_" + std::to_string(run.seed_index);
        if (run.failed) {
            out << "run_" << tag << "_error=" << run.error << "\n";
            continue;
        }
        out << "run_" << tag << "_utilization=" << format_double(run.utilization) << "\n";
        out << "run_" << tag << "_collisions=" << run.collisions << "\n";
        out << "run_" << tag << "_drops_excess=" << run.drops_excess << "\n";
        out << "run_" << tag << "_drops_overflow=" << run.drops_overflow << "\n";
    }
}

}  // namespace ethersim
