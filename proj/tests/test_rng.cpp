#include <stdexcept>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ethersim/rng.hpp"

using namespace ethersim;

TEST_CASE("same seed and stream id reproduce the draw sequence") {
    RngStream a(42, "station-3");
    RngStream b(42, "station-3");
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream ids decorrelate") {
    RngStream a(42, "station-3");
    RngStream b(42, "station-4");
    int equal = 0;
    for (int i = 0; i < 100; ++i) {
        if (a.next_u64() == b.next_u64()) ++equal;
    }
    CHECK(equal == 0);
}

TEST_CASE("a stream is unaffected by draws on other streams") {
    RngStream a1(7, "a");
    std::vector<std::uint64_t> alone;
    for (int i = 0; i < 10; ++i) alone.push_back(a1.next_u64());

    RngStream a2(7, "a");
    RngStream noise(7, "b");
    for (int i = 0; i < 10; ++i) {
        noise.next_u64();
        CHECK(a2.next_u64() == alone[static_cast<std::size_t>(i)]);
        noise.next_u64();
    }
}

TEST_CASE("uniform_below stays in range and covers it") {
    RngStream rng(1, "u");
    std::vector<int> seen(8, 0);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t k = rng.uniform_below(8);
        REQUIRE(k < 8);
        seen[static_cast<std::size_t>(k)]++;
    }
    for (int count : seen) CHECK(count > 0);
    CHECK_THROWS_AS(rng.uniform_below(0), std::invalid_argument);
}

TEST_CASE("gaussian moments") {
    RngStream rng(5, "g");
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gaussian();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    // 5 sigma bounds on the sample mean and variance of N(0,1)
    CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("exponential has the requested mean") {
    RngStream rng(9, "e");
    const int n = 200000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rng.exponential(4.0);
    CHECK(std::abs(sum / n - 4.0) < 5.0 * 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK_THROWS_AS(rng.exponential(0.0), std::invalid_argument);
}
