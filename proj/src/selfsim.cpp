#include "ethersim/selfsim.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ethersim/rng.hpp"

namespace ethersim {

double rs_statistic(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("rs_statistic: need at least 2 observations");

    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);

    // Partial sums of the mean-adjusted series; the range includes 0 so it
    // always covers the empty prefix.
    double w = 0.0;
    double w_max = 0.0;
    double w_min = 0.0;
    double sq = 0.0;
    for (double x : series) {
        const double d = x - mean;
        w += d;
        w_max = std::max(w_max, w);
        w_min = std::min(w_min, w);
        sq += d * d;
    }
    const double s = std::sqrt(sq / static_cast<double>(n));  // population sd
    if (s == 0.0) throw std::domain_error("rs_statistic: zero variance (constant series)");
    return (w_max - w_min) / s;
}

std::vector<std::size_t> default_block_lengths(std::size_t series_length) {
    const std::size_t lo = std::max<std::size_t>(8, series_length / 256);
    const std::size_t hi = series_length / 2;
    std::vector<std::size_t> lengths;
    if (hi < lo) return lengths;
    constexpr int kPoints = 12;
    const double log_lo = std::log(static_cast<double>(lo));
    const double log_hi = std::log(static_cast<double>(hi));
    for (int j = 0; j < kPoints; ++j) {
        const double f = kPoints == 1 ? 0.0 : static_cast<double>(j) / (kPoints - 1);
        const auto n = static_cast<std::size_t>(std::llround(std::exp(log_lo + f * (log_hi - log_lo))));
        if (lengths.empty() || n > lengths.back()) lengths.push_back(n);
    }
    return lengths;
}

std::vector<RSPoint> pox_points(std::span<const double> series, std::span<const std::size_t> block_lengths) {
    const std::size_t total = series.size();
    if (total < 32) throw std::invalid_argument("pox_points: series too short (need >= 32)");
    std::vector<RSPoint> points;
    for (std::size_t n : block_lengths) {
        if (n < 2 || n > total) {
            throw std::invalid_argument("pox_points: block length outside [2, series length]");
        }
        const std::size_t n_blocks = total / n;
        double sum = 0.0;
        std::size_t valid = 0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            try {
                sum += rs_statistic(series.subspan(b * n, n));
                ++valid;
            } catch (const std::domain_error&) {
                // zero-variance block (an idle stretch); skip it
            }
        }
        if (valid > 0) points.push_back(RSPoint{n, sum / static_cast<double>(valid)});
    }
    if (points.size() < 4) {
        throw std::invalid_argument("pox_points: fewer than 4 valid points, insufficient data");
    }
    return points;
}

HurstEstimate fit_pox(std::vector<RSPoint> points) {
    if (points.size() < 2) throw std::invalid_argument("fit_pox: need at least 2 points");
    std::sort(points.begin(), points.end(), [](const RSPoint& a, const RSPoint& b) { return a.n < b.n; });

    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const RSPoint& p : points) {
        const double x = std::log(static_cast<double>(p.n));
        const double y = std::log(p.mean_rs);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double ss_xx = sxx - sx * sx / n;
    const double ss_yy = syy - sy * sy / n;
    const double ss_xy = sxy - sx * sy / n;
    if (ss_xx == 0.0) throw std::invalid_argument("fit_pox: degenerate block lengths");

    HurstEstimate est;
    est.h = ss_xy / ss_xx;
    est.c = std::exp(sy / n - est.h * sx / n);
    est.r_squared = ss_yy == 0.0 ? 1.0 : (ss_xy * ss_xy) / (ss_xx * ss_yy);
    est.points = std::move(points);
    return est;
}

HurstEstimate hurst_estimate(std::span<const double> series, std::span<const std::size_t> block_lengths) {
    return fit_pox(pox_points(series, block_lengths));
}

HurstEstimate hurst_estimate(std::span<const double> series) {
    const std::vector<std::size_t> lengths = default_block_lengths(series.size());
    return hurst_estimate(series, lengths);
}

Series gen_white_noise(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("gen_white_noise: n must be >= 1");
    RngStream rng(seed, "white-noise");
    Series series(n);
    for (double& x : series) x = rng.gaussian();
    return series;
}

namespace {

// In-place iterative radix-2 FFT; sizes here are always powers of two, so a
// dependency-free transform keeps the generator bit-reproducible everywhere.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / static_cast<double>(len);
        const std::complex<double> w_len(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= static_cast<double>(n);
    }
}

}  // namespace

Series gen_fgn(std::size_t n, double h_target, std::uint64_t seed) {
    if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("gen_fgn: n must be a power of two >= 2");
    if (!(h_target > 0.0 && h_target < 1.0)) throw std::invalid_argument("gen_fgn: H must be in (0, 1)");

    const std::size_t m = 2 * n;
    const double two_h = 2.0 * h_target;

    // fGn autocovariance gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2,
    // laid out as the first row of a circulant matrix of order 2n.
    std::vector<double> gamma(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        gamma[k] = 0.5 * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) +
                          std::pow(std::abs(kd - 1.0), two_h));
    }
    std::vector<std::complex<double>> spectrum(m);
    for (std::size_t j = 0; j < m; ++j) {
        spectrum[j] = gamma[j <= n ? j : m - j];
    }
    fft_radix2(spectrum, false);

    // The circulant eigenvalues of a valid fGn covariance are non-negative;
    // anything beyond rounding noise would mean the embedding failed.
    std::vector<double> eigen(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double lambda = spectrum[j].real();
        if (lambda < -1e-9 * static_cast<double>(m)) {
            throw std::logic_error("gen_fgn: negative circulant eigenvalue");
        }
        eigen[j] = std::max(0.0, lambda);
    }

    // Hermitian-symmetric Gaussian spectrum: the inverse transform is real.
    RngStream rng(seed, "fgn");
    std::vector<std::complex<double>> field(m);
    field[0] = std::sqrt(eigen[0]) * rng.gaussian();
    field[n] = std::sqrt(eigen[n]) * rng.gaussian();
    const double half = std::sqrt(0.5);
    for (std::size_t j = 1; j < n; ++j) {
        const double re = rng.gaussian() * half;
        const double im = rng.gaussian() * half;
        field[j] = std::sqrt(eigen[j]) * std::complex<double>(re, im);
        field[m - j] = std::conj(field[j]);
    }
    fft_radix2(field, false);

    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    Series series(n);
    for (std::size_t k = 0; k < n; ++k) series[k] = field[k].real() * scale;
    return series;
}

}  // namespace ethersim
