#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ethersim/config.hpp"
#include "ethersim/experiment.hpp"
#include "ethersim/selfsim.hpp"
#include "ethersim/trace.hpp"

using namespace ethersim;

namespace {

void usage(std::ostream& out) {
    out << "usage:\n"
        << "  expcli run <config>                 run the max-retx sweep described by the config\n"
        << "  expcli analyze <trace.csv> [pox.csv] estimate H from an exported trace\n"
        << "  expcli selftest                      run the estimator calibration checks\n"
        << "\n"
        << "Config is flat 'key = value' text; an empty file runs the defaults\n"
        << "(32 clients, 2 servers, max_retx sweep 3,6,9, bin widths 5,10,20 s).\n";
}

int cmd_run(const std::string& config_path) {
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    const ExperimentReport report = run_sweep(config);
    for (const SweepPoint& p : report.summarize()) {
        std::printf("max_retx=%d  bin_width=%gs  H=%.4f +- %.4f  (n=%d)\n", p.max_retx, p.bin_width_s,
                    p.mean_h, p.sd_h, p.n_seeds);
    }
    for (const RunStats& run : report.runs) {
        if (run.failed) {
            std::fprintf(stderr, "run max_retx=%d seed=%d FAILED: %s\n", run.max_retx, run.seed_index,
                         run.error.c_str());
        }
    }
    std::printf("artifacts written to %s\n", config.output_dir.c_str());
    return report.any_failed() ? 2 : 0;
}

int cmd_analyze(const std::string& trace_path, const std::string& pox_path) {
    std::ifstream in(trace_path);
    if (!in) {
        std::cerr << "cannot open " << trace_path << "\n";
        return 1;
    }
    HurstEstimate est;
    try {
        const TrafficTrace trace = read_trace_csv(in);
        Series series(trace.bins.begin(), trace.bins.end());
        est = hurst_estimate(series);
    } catch (const std::exception& e) {
        std::cerr << "analyze failed: " << e.what() << "\n";
        return 1;
    }
    if (!pox_path.empty()) {
        std::ofstream pox(pox_path, std::ios::binary);
        if (!pox) {
            std::cerr << "cannot write " << pox_path << "\n";
            return 1;
        }
        pox << "n,mean_rs\n";
        for (const RSPoint& p : est.points) {
            pox << p.n << ',' << p.mean_rs << '\n';
        }
    }
    std::printf("H=%.6f\n", est.h);
    std::printf("c=%.6f\n", est.c);
    std::printf("r_squared=%.6f\n", est.r_squared);
    std::printf("n_points=%zu\n", est.points.size());
    return 0;
}

int cmd_selftest() {
    bool ok = true;
    constexpr int kSeeds = 20;
    constexpr std::size_t kLength = 1 << 15;

    {
        double sum = 0.0;
        for (int s = 0; s < kSeeds; ++s) {
            sum += hurst_estimate(gen_white_noise(kLength, 1000 + s)).h;
        }
        const double mean = sum / kSeeds;
        const bool pass = mean >= 0.47 && mean <= 0.58;
        ok = ok && pass;
        std::printf("%s  white noise: mean H = %.4f (expect 0.47..0.58, theoretical 0.5)\n",
                    pass ? "PASS" : "FAIL", mean);
    }

    for (double target : {0.6, 0.7, 0.8, 0.9}) {
        double sum = 0.0;
        for (int s = 0; s < kSeeds; ++s) {
            sum += hurst_estimate(gen_fgn(kLength, target, 2000 + s)).h;
        }
        const double mean = sum / kSeeds;
        const bool pass = std::abs(mean - target) <= 0.05;
        ok = ok && pass;
        std::printf("%s  fGn H=%.1f: mean estimate = %.4f (tolerance +-0.05)\n", pass ? "PASS" : "FAIL",
                    target, mean);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "-h" || args[0] == "--help") {
        usage(args.empty() ? std::cerr : std::cout);
        return args.empty() ? 1 : 0;
    }

    try {
        if (args[0] == "run") {
            if (args.size() != 2) {
                usage(std::cerr);
                return 1;
            }
            return cmd_run(args[1]);
        }
        if (args[0] == "analyze") {
            if (args.size() != 2 && args.size() != 3) {
                usage(std::cerr);
                return 1;
            }
            return cmd_analyze(args[1], args.size() == 3 ? args[2] : "");
        }
        if (args[0] == "selftest") {
            return cmd_selftest();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::cerr << "unknown command '" << args[0] << "'\n";
    usage(std::cerr);
    return 1;
}
