#include "fakemix/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fakemix {

int64_t SeededRng::uniform_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
    // Rejection sampling over the largest multiple of span.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return lo + static_cast<int64_t>(v % span);
}

double SeededRng::normal() {
    // Box-Muller; u1 in (0,1] avoids log(0).
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

double SeededRng::gamma(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("gamma: alpha must be > 0");
    if (alpha < 1.0) {
        // Boost: G(a) = G(a+1) * U^(1/a).
        const double u = 1.0 - uniform();
        return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    // Marsaglia-Tsang squeeze.
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double SeededRng::beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

TranslationVector sample_translation(int width, int height, double lambda, SeededRng& rng) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("sample_translation: lambda must be in [0,1]");
    const double bx = lambda * width;
    const double by = lambda * height;
    const double fx = rng.uniform(-bx, bx);
    const double fy = rng.uniform(-by, by);
    // Round to nearest, ties away from zero; |result| stays <= bound.
    return TranslationVector{static_cast<int>(std::lround(fx)),
                             static_cast<int>(std::lround(fy))};
}

}  // namespace fakemix
