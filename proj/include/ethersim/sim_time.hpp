#pragma once

#include <cmath>
#include <cstdint>

namespace ethersim {

// Simulated clock, integer nanoseconds since the start of the run.
// All protocol timing constants convert exactly to ticks at this resolution.
using SimTime = std::int64_t;

constexpr SimTime kTicksPerMicrosecond = 1'000;
constexpr SimTime kTicksPerMillisecond = 1'000'000;
constexpr SimTime kTicksPerSecond = 1'000'000'000;

inline SimTime from_seconds(double s) {
    return static_cast<SimTime>(std::llround(s * static_cast<double>(kTicksPerSecond)));
}

inline SimTime from_microseconds(double us) {
    return static_cast<SimTime>(std::llround(us * static_cast<double>(kTicksPerMicrosecond)));
}

inline double to_seconds(SimTime t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

}  // namespace ethersim
