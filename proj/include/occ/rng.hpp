#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace occ {

// Seed mixing for deriving independent sub-streams from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t s = base ^ (0x9E3779B97F4A7C15ULL * (salt + 1));
    return splitmix64(s);
}

// Uniform in [0,1) with 53 bits; avoids the implementation-defined behavior of
// std::uniform_real_distribution so that streams are reproducible everywhere.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on the portable uniform stream.
inline double normal01(std::mt19937_64& g) {
    const double u1 = 1.0 - uniform01(g);  // (0,1]
    const double u2 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Marsaglia-Tsang gamma sampler; alpha < 1 handled by the boost identity
// Gamma(a) = Gamma(a+1) * U^{1/a}.
inline double gamma_sample(std::mt19937_64& g, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("gamma_sample: alpha must be > 0");
    if (alpha < 1.0) {
        const double u = uniform01(g);
        return gamma_sample(g, alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal01(g);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01(g);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

inline std::vector<double> dirichlet_sample(std::mt19937_64& g, std::size_t n, double alpha) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& wi : w) {
        wi = gamma_sample(g, alpha);
        total += wi;
    }
    if (total <= 0.0) {  // pathological underflow; fall back to uniform
        for (auto& wi : w) wi = 1.0 / static_cast<double>(n);
        return w;
    }
    for (auto& wi : w) wi /= total;
    return w;
}

}  // namespace occ
