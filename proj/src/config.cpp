#include "ethersim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ethersim {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
    throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& source, int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(source, line, "key '" + key + "': expected a number, got '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& source, int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(source, line, "key '" + key + "': expected an integer, got '" + value + "'");
    }
}

std::uint64_t parse_uint(const std::string& source, int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail(source, line, "key '" + key + "': expected a non-negative integer, got '" + value + "'");
    }
}

}  // namespace

double ExperimentConfig::think_mean_s() const {
    if (workload.think_time) return workload.think_time->mean;
    return calibrated_think_mean_s(topology(), ethernet, workload.file_size.mean,
                                   workload.target_utilization);
}

void ExperimentConfig::validate() const {
    if (!(duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
    if (warmup_s < 0.0) throw ConfigError("warmup_s must be >= 0");
    if (!(duration_s > warmup_s)) throw ConfigError("duration_s must exceed warmup_s");
    try {
        topology().validate();
        EthernetParams checked = ethernet;
        checked.max_retx = 1;  // the real value comes from the sweep
        checked.validate();
        workload.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (max_retx_sweep.empty()) throw ConfigError("max_retx_sweep must not be empty");
    for (int r : max_retx_sweep) {
        if (r < 1) throw ConfigError("max_retx_sweep entries must be >= 1");
    }
    if (bin_widths_s.empty()) throw ConfigError("bin_widths_s must not be empty");
    double prev = 0.0;
    for (double w : bin_widths_s) {
        if (!(w > 0.0)) throw ConfigError("bin_widths_s entries must be > 0");
        if (w <= prev) throw ConfigError("bin_widths_s must be strictly ascending");
        prev = w;
    }
    if (seeds_per_point < 1) throw ConfigError("seeds_per_point must be >= 1");
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source_name) {
    ExperimentConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(source_name, line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(source_name, line_no, "missing key");
        if (value.empty()) fail(source_name, line_no, "missing value for key '" + key + "'");

        if (key == "master_seed") {
            cfg.master_seed = parse_uint(source_name, line_no, key, value);
        } else if (key == "duration_s") {
            cfg.duration_s = parse_double(source_name, line_no, key, value);
        } else if (key == "warmup_s") {
            cfg.warmup_s = parse_double(source_name, line_no, key, value);
        } else if (key == "n_clients") {
            cfg.n_clients = static_cast<std::uint32_t>(parse_uint(source_name, line_no, key, value));
        } else if (key == "n_servers") {
            cfg.n_servers = static_cast<std::uint32_t>(parse_uint(source_name, line_no, key, value));
        } else if (key == "bandwidth_bps") {
            cfg.ethernet.bandwidth_bps = parse_int(source_name, line_no, key, value);
        } else if (key == "prop_delay_ns") {
            cfg.ethernet.prop_delay = parse_int(source_name, line_no, key, value);
        } else if (key == "slot_time_us") {
            cfg.ethernet.slot_time = from_microseconds(parse_double(source_name, line_no, key, value));
        } else if (key == "jam_time_us") {
            cfg.ethernet.jam_time = from_microseconds(parse_double(source_name, line_no, key, value));
        } else if (key == "ifg_us") {
            cfg.ethernet.ifg = from_microseconds(parse_double(source_name, line_no, key, value));
        } else if (key == "backoff_exponent_cap") {
            cfg.ethernet.backoff_exponent_cap = static_cast<int>(parse_int(source_name, line_no, key, value));
        } else if (key == "queue_depth") {
            cfg.ethernet.queue_depth = static_cast<std::size_t>(parse_uint(source_name, line_no, key, value));
        } else if (key == "file_size_dist") {
            try {
                cfg.workload.file_size = DistSpec::parse(value);
            } catch (const std::invalid_argument& e) {
                fail(source_name, line_no, e.what());
            }
        } else if (key == "think_time_dist") {
            try {
                cfg.workload.think_time = DistSpec::parse(value);
            } catch (const std::invalid_argument& e) {
                fail(source_name, line_no, e.what());
            }
        } else if (key == "target_utilization") {
            cfg.workload.target_utilization = parse_double(source_name, line_no, key, value);
        } else if (key == "max_retx_sweep") {
            cfg.max_retx_sweep.clear();
            for (const std::string& item : split_list(value)) {
                cfg.max_retx_sweep.push_back(static_cast<int>(parse_int(source_name, line_no, key, item)));
            }
        } else if (key == "bin_widths_s") {
            cfg.bin_widths_s.clear();
            for (const std::string& item : split_list(value)) {
                cfg.bin_widths_s.push_back(parse_double(source_name, line_no, key, item));
            }
        } else if (key == "seeds_per_point") {
            cfg.seeds_per_point = static_cast<int>(parse_int(source_name, line_no, key, value));
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else {
            fail(source_name, line_no, "unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in, path);
}

}  // namespace ethersim
