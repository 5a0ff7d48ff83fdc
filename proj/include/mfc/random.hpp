#pragma once

#include <cstdint>
#include <random>

namespace mfc {

// The engine is fully specified by the standard; the helpers below avoid the
// library-defined distributions so draws are identical across toolchains.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], unbiased.
inline int uniform_int(Rng& rng, int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = Rng::max() - Rng::max() % span;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return lo + static_cast<int>(v % span);
}

}  // namespace mfc
