// Counter-based deterministic random streams. A stream is derived from a
// (seed, label...) key, so parallel or reordered consumers draw identical
// values for identical keys.

#ifndef MULTIVENC_RNG_HPP
#define MULTIVENC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <utility>

namespace mvenc::rng {

// splitmix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Stream {
public:
    explicit Stream(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1].
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Uniform in [a, b).
    double next_uniform(double a, double b) {
        return a + (b - a) * (static_cast<double>(next_u64() >> 11) * 0x1.0p-53);
    }

    // Standard normal pair via Box-Muller.
    std::pair<double, double> next_gaussian_pair() {
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

private:
    std::uint64_t state_;
};

inline Stream derive(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                     std::uint64_t c = 0) {
    return Stream(mix(mix(mix(mix(seed) ^ a) ^ b) ^ c));
}

} // namespace mvenc::rng

#endif
