#pragma once

#include <cmath>
#include <cstdint>

namespace satsim {

// Virtual time in integer picoseconds. Integer ticks keep event tie-breaks
// reproducible; a 64-bit tick counter covers ~213 days of simulated time.
using SimTicks = std::uint64_t;

inline constexpr SimTicks kTicksPerUs = 1'000'000ULL;
inline constexpr SimTicks kTicksPerMs = 1'000'000'000ULL;
inline constexpr SimTicks kTicksPerSec = 1'000'000'000'000ULL;

// Transmission/pacing gap for one cell at the given rate, rounded to the
// nearest tick. At 365,000 cells/s this is 2,739,726 ps (error < 1e-4 %).
inline SimTicks ticks_per_cell(double cells_per_sec) {
    return static_cast<SimTicks>(
        std::llround(static_cast<double>(kTicksPerSec) / cells_per_sec));
}

inline double ticks_to_sec(SimTicks t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerSec);
}

inline double ticks_to_ms(SimTicks t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerMs);
}

inline SimTicks ms_to_ticks(double ms) {
    return static_cast<SimTicks>(std::llround(ms * static_cast<double>(kTicksPerMs)));
}

}  // namespace satsim
