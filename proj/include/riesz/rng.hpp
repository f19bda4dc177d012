#pragma once

#include <cmath>
#include <cstdint>

namespace riesz {

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream: draw k is mix64(key + k*odd_gamma). A stream is fully
// determined by (master seed, coordinate, path index), so splitting the path
// ensemble across workers cannot change any draw.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    CounterRng(std::uint64_t seed, std::uint64_t coordinate, std::uint64_t path)
        : CounterRng(derive_key(seed, coordinate, path)) {}

    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t coordinate,
                                    std::uint64_t path) {
        std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ULL);
        k = mix64(k ^ (0xbf58476d1ce4e5b9ULL * (coordinate + 1)));
        k = mix64(k ^ (0x94d049bb133111ebULL * (path + 1)));
        return k;
    }

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    // uniform on the open interval (0, 1)
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal, Box-Muller; the second draw of each pair is cached
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace riesz
