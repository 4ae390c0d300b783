#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace epps {

// splitmix64 finalizer. Used to derive independent substream seeds from a
// master seed so replications can run in parallel with reproducible streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream + 0x682f0161d9f9ae2bULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(mix64(seed));
}

// Uniform on (0, 1]. Explicit bit manipulation so draws do not depend on the
// standard library's distribution implementation.
inline double uniform01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

inline double exponential_draw(std::mt19937_64& rng, double rate) {
    return -std::log(uniform01(rng)) / rate;
}

// Marsaglia polar method.
inline double normal_draw(std::mt19937_64& rng, double mean, double sd) {
    double u, v, s;
    do {
        u = 2.0 * uniform01(rng) - 1.0;
        v = 2.0 * uniform01(rng) - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
}

// Marsaglia--Tsang, with the boost U^{1/a} trick for shape < 1.
inline double gamma_draw(std::mt19937_64& rng, double shape) {
    if (shape < 1.0) {
        double u = uniform01(rng);
        return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal_draw(rng, 0.0, 1.0);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform01(rng);
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return d * v;
        }
    }
}

inline double beta_draw(std::mt19937_64& rng, double a, double b) {
    double x = gamma_draw(rng, a);
    double y = gamma_draw(rng, b);
    return x / (x + y);
}

// Pareto with scale x_m and tail exponent alpha (density alpha x_m^a / x^{a+1}).
inline double pareto_draw(std::mt19937_64& rng, double x_m, double alpha) {
    return x_m * std::pow(uniform01(rng), -1.0 / alpha);
}

} // namespace epps
