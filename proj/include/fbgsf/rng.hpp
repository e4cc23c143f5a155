#pragma once

#include <cmath>
#include <cstdint>

namespace fbgsf {

// Deterministic, platform-independent RNG. std::normal_distribution is
// implementation-defined, so uniforms and gaussians are generated by hand.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    // Derives an independent stream for (seed, index), used so per-sample
    // generation is order-independent.
    static Rng substream(uint64_t seed, uint64_t index) {
        Rng r(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
        r.next();
        return r;
    }

    // splitmix64
    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (fresh pair each call, no cached spare).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n) { return next() % n; }

  private:
    uint64_t state_;
};

}  // namespace fbgsf
