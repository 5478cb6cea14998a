#pragma once

#include <cstdint>

#include "fakemix/types.hpp"

namespace fakemix {

/// Counter-derived deterministic random stream. A (seed, stream) pair fully
/// determines the draw sequence; integer and raw-bit draws are identical on
/// every platform (only IEEE arithmetic, no libm, no std distributions).
///
/// Streams are intended to be derived per (sample, purpose); instances are
/// cheap and never shared between threads.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed, uint64_t stream = 0)
        : state_(mix64(seed) ^ mix64(stream + 0x9e3779b97f4a7c15ull)) {}

    /// splitmix64 step.
    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Uniform integer in [lo, hi], both inclusive, unbiased.
    int64_t uniform_int(int64_t lo, int64_t hi);

    /// Uniform index in [0, n).
    size_t uniform_index(size_t n) {
        return static_cast<size_t>(uniform_int(0, static_cast<int64_t>(n) - 1));
    }

    /// True with probability p. Exact at p=0 and p=1.
    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller.
    double normal();

    /// Gamma(alpha), Marsaglia-Tsang; alpha > 0.
    double gamma(double alpha);

    /// Beta(a, b) via two gamma draws.
    double beta(double a, double b);

private:
    static uint64_t mix64(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

/// Draw an integer-pixel translation with dx ~ U(-lambda*w, lambda*w) and
/// dy ~ U(-lambda*h, lambda*h), rounded to nearest with ties away from zero.
/// Bounds are inclusive after rounding. Rejects lambda outside [0,1].
TranslationVector sample_translation(int width, int height, double lambda, SeededRng& rng);

}  // namespace fakemix
