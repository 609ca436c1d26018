#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace lda {

// SplitMix64 mixing step.  Used to derive independent stream seeds from a
// master seed so that Monte Carlo results do not depend on how trials are
// split across workers.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream + 1));
}

// Deterministic random source.  std::mt19937_64 is fully specified by the
// standard; the distribution helpers below are hand-rolled because the
// std::uniform_* distributions are not guaranteed to produce identical
// streams across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Unbiased integer in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound) {
        // largest multiple of bound that fits in 64 bits
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * unit(); }

    // Standard normal via Box-Muller.  The sine mate is discarded; this
    // costs an extra log per draw but keeps the stream position a simple
    // function of the number of draws.
    double gaussian() {
        const double u1 = 1.0 - unit();  // (0, 1], keeps log finite
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    // Student-t with integer df >= 1, unit scale (not unit variance).
    double student_t(int df) {
        const double z = gaussian();
        double chi2 = 0.0;
        for (int i = 0; i < df; ++i) {
            const double g = gaussian();
            chi2 += g * g;
        }
        return z / std::sqrt(chi2 / df);
    }

    // In-place Fisher-Yates shuffle (std::shuffle is not reproducible
    // across standard library implementations).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace lda
