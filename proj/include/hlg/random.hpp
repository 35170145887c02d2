#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hlg {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based child seed: stream `index` of `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

using Engine = std::mt19937_64;

/// Uniform on the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open(Engine& eng) {
    for (;;) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

/// Standard normal by the polar method (portable across standard libraries).
class NormalSource {
public:
    double operator()(Engine& eng) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform_open(eng) - 1.0;
            v = 2.0 * uniform_open(eng) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double mul = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * mul;
        has_spare_ = true;
        return u * mul;
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace hlg
