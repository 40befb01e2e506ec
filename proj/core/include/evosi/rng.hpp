#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace evosi {

using rng_t = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 20240917ULL;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// seed for trial i of a run; also used to split a trial into independent streams
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// uniform on [0,1)
inline double uniform01(rng_t& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// uniform on (0,1]
inline double uniform01_open(rng_t& g) {
    return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

// uniform integer in [0, n), n > 0 (Lemire's method)
inline std::uint64_t uniform_below(rng_t& g, std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(g()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t t = (0 - n) % n;
        while (lo < t) {
            m = static_cast<unsigned __int128>(g()) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

inline double exponential(rng_t& g, double rate) {
    return -std::log(uniform01_open(g)) / rate;
}

} // namespace evosi
