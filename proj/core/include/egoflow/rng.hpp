#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace egoflow {

/// Deterministic random source.
///
/// std::mt19937_64 is bit-exact across platforms, but the standard
/// distributions are not; uniform and gaussian draws are implemented here
/// directly so that identical seeds give identical streams on every
/// toolchain (required for reproducible synthetic fields and sequences).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is biased for huge n; n here is always
        // far below 2^53 (feature counts, trial counts), so scaling is exact
        // enough and keeps the draw count per call fixed.
        return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
    }

    /// Standard normal via Box-Muller (two uniforms per pair, cached).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace egoflow
