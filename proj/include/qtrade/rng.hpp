#pragma once
// Counter-based pseudorandom generator: SplitMix64 evaluated at
// seed + (counter+1)*GAMMA. Output i depends only on (seed, i), so streams
// can be split deterministically and results do not depend on call
// interleaving across streams. Constants are the published SplitMix64 ones.

#include <cmath>
#include <complex>
#include <cstdint>

namespace qtrade {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return mix(seed_ + (++counter_) * kGamma); }

    // Child stream: seed derived by hashing (seed, stream index). Distinct
    // indices give decorrelated streams regardless of draw counts.
    Rng split(std::uint64_t stream_index) const {
        return Rng(mix(mix(seed_ ^ kStreamSalt) + (stream_index + 1) * kGamma));
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

  private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kStreamSalt = 0x5851F42D4C957F2Dull;
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qtrade
