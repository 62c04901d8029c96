#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace negembed::rng {

namespace detail {
inline std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
} // namespace detail

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// Splittable counter-style stream: the state advances by the golden-ratio
/// increment and each output is a finalized mix (splitmix64). Streams are
/// derived by hashing (seed, id...) so substreams are deterministic and
/// practically non-overlapping.
struct Stream {
    std::uint64_t state = 0;

    std::uint64_t next_u64() {
        state += kGolden;
        return detail::mix(state);
    }
    /// uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    /// uniform in (0, 1), both endpoints excluded
    double next_unit_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }
    /// standard normal via Box-Muller (consumes two uniforms)
    double next_gauss() {
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }
    /// Exp(1)
    double next_exp() { return -std::log(next_unit_open()); }
};

inline Stream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = detail::mix(seed + kGolden);
    for (std::uint64_t id : ids) h = detail::mix(h ^ detail::mix(id + kGolden));
    return Stream{h};
}

} // namespace negembed::rng
