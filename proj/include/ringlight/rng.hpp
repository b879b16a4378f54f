#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ringlight {

/// Seedable generator with a platform-independent output stream.
///
/// The raw engine is std::mt19937_64, whose sequence is fixed by the
/// standard. The std distributions are implementation-defined, so the
/// uniform and normal variates are derived here: uniform() takes the top 53
/// bits of one engine draw, normal() is Box-Muller on two uniforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal variate.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Seed of realization `index` in an ensemble started from `base_seed`.
inline std::uint64_t realization_seed(std::uint64_t base_seed, std::uint64_t index) {
    return base_seed + index;
}

} // namespace ringlight
