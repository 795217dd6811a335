#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ethersim {

using Series = std::vector<double>;

struct RSPoint {
    std::size_t n = 0;      // block length
    double mean_rs = 0.0;   // average R/S over the non-overlapping blocks
};

struct HurstEstimate {
    double h = 0.0;         // log-log regression slope
    double c = 0.0;         // exp(intercept)
    double r_squared = 0.0;
    std::vector<RSPoint> points;
};

// Rescaled adjusted range of one block: with W_k the mean-adjusted partial
// sums, R = max(0, W_1..W_n) - min(0, W_1..W_n) and S the population standard
// deviation.  Throws std::domain_error on a constant series (S = 0) and
// std::invalid_argument for n < 2.
double rs_statistic(std::span<const double> series);

// ~12 log-spaced block lengths in [max(8, n/256), n/2].
std::vector<std::size_t> default_block_lengths(std::size_t series_length);

// Mean R/S per block length over floor(N/n) non-overlapping blocks, skipping
// zero-variance blocks.  Throws std::invalid_argument when fewer than 4
// block lengths yield a valid point.
std::vector<RSPoint> pox_points(std::span<const double> series, std::span<const std::size_t> block_lengths);

// Ordinary least squares of log(mean_rs) on log(n); slope is the Hurst
// estimate, no clamping.
HurstEstimate fit_pox(std::vector<RSPoint> points);

HurstEstimate hurst_estimate(std::span<const double> series);
HurstEstimate hurst_estimate(std::span<const double> series, std::span<const std::size_t> block_lengths);

// Calibration generators.  Deterministic in the seed.
Series gen_white_noise(std::size_t n, std::uint64_t seed);

// Exact fractional Gaussian noise by circulant (spectral) embedding of the
// fGn autocovariance; n must be a power of two, 0 < h_target < 1.
Series gen_fgn(std::size_t n, double h_target, std::uint64_t seed);

}  // namespace ethersim
