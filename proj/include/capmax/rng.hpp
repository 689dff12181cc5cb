#ifndef CAPMAX_RNG_HPP
#define CAPMAX_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace capmax {

/// Deterministic 64-bit generator (splitmix64 core). Unlike the std::
/// distributions, the draw sequence is identical on every platform, which
/// keeps benchmark trials and model initializations bit-reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Derive an independent stream from a seed and up to three stream ids.
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
        Rng mixer(seed);
        mixer.state_ ^= mixer.next_u64() + 0x9e3779b97f4a7c15ull * (a + 1);
        mixer.state_ ^= mixer.next_u64() + 0x9e3779b97f4a7c15ull * (b + 1);
        mixer.state_ ^= mixer.next_u64() + 0x9e3779b97f4a7c15ull * (c + 1);
        mixer.next_u64();
        return mixer;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard real normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(6.283185307179586476925287 * u2);
        have_spare_ = true;
        return mag * std::cos(6.283185307179586476925287 * u2);
    }

    /// Standard complex normal CN(0,1): Re and Im each N(0, 1/2).
    std::complex<double> cnormal() {
        const double s = 0.7071067811865475244;
        return {s * normal(), s * normal()};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace capmax

#endif
