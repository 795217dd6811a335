#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace ethersim {

// A named random stream derived from (master seed, stream id).  Two streams
// with different ids draw from independent sequences, so adding draws to one
// entity never perturbs another.  All distributions are implemented by hand
// on top of mt19937_64 because the std:: distribution objects are not
// bit-identical across standard library implementations.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::string_view stream_id);

    std::uint64_t next_u64() { return gen_(); }

    // Unbiased draw in [0, bound), bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);

    // Inclusive range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // [0, 1) with 53 random bits.
    double uniform01();

    // Exponential with the given mean (> 0).
    double exponential(double mean);

    // Standard normal via Box-Muller, one spare cached.
    double gaussian();

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Deterministic seed mixing used to derive per-run and per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t hash_label(std::string_view label);

}  // namespace ethersim
