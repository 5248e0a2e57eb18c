#include "dnr/random.hpp"

#include <cmath>
#include <numbers>

namespace dnr {

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix(s);
    std::uint64_t t = index ^ 0xD1B54A32D192ED03ull;
    const std::uint64_t b = splitmix(t);
    state_ = a ^ (b * 0x9E3779B97F4A7C15ull);
}

std::uint64_t CounterRng::next_u64() { return splitmix(state_); }

double CounterRng::uniform() {
    // 53 random bits, shifted off zero.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

ComplexVector random_unit_vector(std::size_t n, std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, index);
    ComplexVector h(n);
    for (auto& v : h) v = rng.complex_normal();
    normalize(h);
    return h;
}

ComplexMatrix random_gaussian_matrix(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, 0x6D61747269780000ull);
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.complex_normal();
    return m;
}

ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    const ComplexMatrix g = random_gaussian_matrix(n, seed ^ 0x756E6974ull);
    std::vector<ComplexVector> cols(n, ComplexVector(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) cols[j][i] = g(i, j);
        // Modified Gram-Schmidt, twice for stability.
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                const Complex proj = inner(cols[j], cols[k]);
                for (std::size_t i = 0; i < n; ++i) cols[j][i] -= proj * cols[k][i];
            }
        normalize(cols[j]);
    }
    ComplexMatrix u(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u(i, j) = cols[j][i];
    return u;
}

}  // namespace dnr
