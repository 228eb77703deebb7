#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace arctrack {

/// SplitMix64 evaluated in counter mode: draw i of a stream is a pure
/// function of (seed, i), so streams are reproducible bit-for-bit across
/// platforms and independent of evaluation order. Gaussian variates come
/// from the Box-Muller transform on two counter draws.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t i) const {
        return mix(seed_ + (i + 1) * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01(std::uint64_t i) const {
        return static_cast<double>(at(i) >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    double uniform_open(std::uint64_t i) const {
        return static_cast<double>((at(i) >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal pair from draws i and i+1.
    std::pair<double, double> gaussian_pair(std::uint64_t i) const {
        const double u1 = uniform_open(i);
        const double u2 = uniform01(i + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace arctrack
