#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "enton/model.hpp"

namespace enton {

/// splitmix64 step; also used to fold several seed components into one.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    std::uint64_t s = a;
    std::uint64_t h = splitmix64(s);
    s ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= splitmix64(s);
    s ^= c + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return splitmix64(s);
}

/// Seeded generator with hand-rolled transforms. std distributions are
/// implementation-defined, so all sampling goes through these methods to keep
/// outputs reproducible for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; safe as a log argument.
    double uniform01_open_low() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (no caching, two uniforms per draw).
    double normal() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Vec3 normal3() { return {normal(), normal(), normal()}; }

    Vec3 unit_vector() {
        for (;;) {
            Vec3 v = normal3();
            const double n = v.norm();
            if (n > 1e-12) return v / n;
        }
    }

    Vec3 uniform_in_ball(const Vec3& center, double radius) {
        const double r = radius * std::cbrt(uniform01());
        return center + unit_vector() * r;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace enton
