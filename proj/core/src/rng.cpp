#include "patnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace patnet {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

std::uint64_t Rng::bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::bounded: n must be > 0");
    const std::uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double Rng::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u1 = 0.0;
    do {
        u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_normal_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

int Rng::poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("Rng::poisson: negative rate");
    if (lambda == 0.0) return 0;
    if (lambda > 60.0) {
        // Sum of two independent halves keeps the multiplication method exact.
        const double half = lambda / 2.0;
        return poisson(half) + poisson(lambda - half);
    }
    const double limit = std::exp(-lambda);
    int k = 0;
    double prod = next_double();
    while (prod > limit) {
        ++k;
        prod *= next_double();
    }
    return k;
}

std::size_t Rng::categorical(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("Rng::categorical: empty weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("Rng::categorical: invalid weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("Rng::categorical: zero total weight");
    const double target = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    return weights.size() - 1;
}

}  // namespace patnet
