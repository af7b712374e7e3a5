#pragma once

#include <cmath>    // std::log
#include <cstddef>  // std::size_t
#include <cstdint>  // std::uint64_t
#include <random>   // std::mt19937_64
#include <utility>  // std::swap
#include <vector>   // std::vector

namespace nyts {

/// Seeded generator whose output sequence is identical across standard libraries.
///
/// std::mt19937_64 is fully specified by the standard, the std:: distributions are not,
/// so the few distributions needed here are derived from raw engine output.
class rng {
  public:
    explicit rng(const std::uint64_t seed) :
        engine_{ seed } {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t uniform_index(const std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(const double p) { return uniform01() < p; }

    /// Standard logistic variate.
    double logistic() {
        double u = uniform01();
        while (u == 0.0) {
            u = uniform01();
        }
        return std::log(u / (1.0 - u));
    }

    template <typename T>
    void shuffle(std::vector<T> &values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[uniform_index(i)]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

/// Derives an independent child seed; used to pre-assign per-tree and per-fold seeds.
[[nodiscard]] inline std::uint64_t derive_seed(const std::uint64_t seed, const std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace nyts
