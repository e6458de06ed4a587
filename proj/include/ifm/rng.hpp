#ifndef IFM_RNG_HPP
#define IFM_RNG_HPP

#include <cstdint>

namespace ifm {

/// Counter-based uniform generator built on the splitmix64 finalizer.
/// Draw i of a stream is a pure function of (seed, i), so sampling can be
/// sharded across workers with bit-identical results to a serial pass.
inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Uniform double in [0, 1) for draw `counter` of stream `seed`.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h = splitmix64(splitmix64(seed) ^ splitmix64(counter));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Derived stream seed for a sub-task (sweep row, shard, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) + index);
}

}  // namespace ifm

#endif
