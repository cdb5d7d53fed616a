#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace patnet {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Derives the seed of stream `index` from a master seed. Streams with
/// different indices are statistically independent for our purposes and the
/// mapping is fixed forever: changing it would silently change every seeded
/// artifact.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

/// std::mt19937_64 with a self-implemented distribution layer. The engine's
/// output sequence is mandated by the standard, but the standard library's
/// distributions are not, so everything downstream of raw bits lives here to
/// keep results identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, n). Unbiased via rejection. n must be > 0.
    std::uint64_t bounded(std::uint64_t n);

    /// Uniform on [0, 1) with 53 random bits.
    double next_double();

    bool bernoulli(double p) { return next_double() < p; }

    /// Standard normal, Box-Muller (one spare cached).
    double normal();

    /// Poisson draw; exact for small rates, recursive split above 60.
    int poisson(double lambda);

    /// Index draw from unnormalized weights (linear scan over the CDF).
    std::size_t categorical(std::span<const double> weights);

    /// Fisher-Yates over the whole vector.
    template <class T>
    void shuffle(std::vector<T>& v) {
        shuffle_range(v.data(), v.size());
    }

    template <class T>
    void shuffle_range(T* data, std::size_t n) {
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(data[i - 1], data[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace patnet
