#pragma once

#include <cstdint>
#include <random>

#include "ellqdet/errors.hpp"
#include "ellqdet/model_params.hpp"

namespace ellqdet {

/// Seeded source of random generic points.
///
/// Draws use mt19937_64 and a fixed 53-bit mantissa construction, so a seed
/// yields the same points on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Modulus uniform in [rmin, rmax], phase uniform in [-pi, pi); returned as its principal log.
    LogComplex annulus(double rmin, double rmax);

    LogComplex spectral() { return annulus(0.5, 2.0); }
    LogComplex nome_q() { return annulus(0.3, 0.8); }
    LogComplex nome_p() { return annulus(0.05, 0.5); }

    /// Random (q, p) passing validate() with no genericity warnings.
    ModelParams params(int n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

inline constexpr int kMaxResamples = 64;

/// Calls `attempt` until it does not throw PoleError; `attempt` draws its own fresh points.
template <typename F>
auto resample_on_pole(F&& attempt, int max_attempts = kMaxResamples) -> decltype(attempt())
{
    for (int i = 1;; ++i) {
        try {
            return attempt();
        } catch (const PoleError&) {
            if (i >= max_attempts) throw;
        }
    }
}

}  // namespace ellqdet
