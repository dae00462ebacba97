#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream key, counter), so changing one consumer's draw count
// never shifts another consumer's values. Required for the monotone
// degradation property of the detection simulator and for parallel
// rendering of rain frames.

#include <cmath>
#include <cstdint>

namespace synmot {

namespace detail {
// SplitMix64 finalizer, applied to a mixed key. Good enough statistical
// quality for simulation noise; not cryptographic.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
}  // namespace detail

enum class Role : std::uint64_t {
    kMiss = 1,
    kJitter = 2,
    kScore = 3,
    kFalsePositiveCount = 4,
    kFalsePositive = 5,
    kRain = 6,
    kSceneGen = 7,
    kOptimizer = 8,
    kBench = 9,
};

// One keyed stream; successive calls advance an internal counter.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0, std::uint64_t c = 0) {
        state_ = detail::mix64(seed);
        state_ = detail::mix64(state_ ^ detail::mix64(a + 0x100000001ull));
        state_ = detail::mix64(state_ ^ detail::mix64(b + 0x200000002ull));
        state_ = detail::mix64(state_ ^ detail::mix64(c + 0x300000003ull));
    }
    RandomStream(std::uint64_t seed, Role role, std::uint64_t b = 0, std::uint64_t c = 0)
        : RandomStream(seed, static_cast<std::uint64_t>(role) * 0x1000003ull, b, c) {}

    std::uint64_t next_u64() { return detail::mix64(state_ ^ counter_++); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi_inclusive) {
        std::uint64_t span = static_cast<std::uint64_t>(hi_inclusive - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    double normal(double mean = 0.0, double sigma = 1.0) {
        // Box-Muller; consumes two uniforms per pair, caches the second.
        if (has_spare_) {
            has_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * kTwoPi_ * 0.5 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return mean + sigma * r * std::cos(a);
    }

    int poisson(double lambda) {
        // Knuth inversion; lambda stays small here (false positives/frame).
        double limit = std::exp(-lambda);
        double p = 1.0;
        int k = 0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    double gamma_int(int shape) {
        // Sum of exponentials; only used for small integer shapes.
        double acc = 0.0;
        for (int i = 0; i < shape; ++i) {
            double u = uniform();
            if (u < 1e-300) u = 1e-300;
            acc -= std::log(u);
        }
        return acc;
    }

    double beta(int a, int b) {
        double ga = gamma_int(a);
        double gb = gamma_int(b);
        return ga / (ga + gb);
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

  private:
    static constexpr double kTwoPi_ = 6.283185307179586;
    std::uint64_t state_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace synmot
