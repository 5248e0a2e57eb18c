#pragma once

// Allocation-free helpers shared by the sampling and search code.

#include "dnr/linalg.hpp"
#include "dnr/random.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace dnr::detail {

inline constexpr std::size_t kMaxDim = 128;
using Buffer = std::array<Complex, kMaxDim>;

/// <Th, h> and ||Th||^2 for a vector h (not necessarily unit).
struct Quad {
    Complex a;
    double nth2;
};

inline Quad quad(const ComplexMatrix& t, const Complex* h) {
    const std::size_t n = t.size();
    const Complex* m = t.data().data();
    Complex a{};
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Complex th{};
        const Complex* row = m + i * n;
        for (std::size_t j = 0; j < n; ++j) th += row[j] * h[j];
        a += th * std::conj(h[i]);
        s += std::norm(th);
    }
    return {a, s};
}

/// Fills h with a normalized complex Gaussian vector drawn from stream (seed, index).
inline void draw_unit(std::size_t n, std::uint64_t seed, std::uint64_t index, Complex* h) {
    CounterRng rng(seed, index);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = rng.complex_normal();
        s += std::norm(h[i]);
    }
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t i = 0; i < n; ++i) h[i] *= inv;
}

/// Real chart of the unit sphere modulo phase: h0 real, the rest as (re, im)
/// pairs. 2n - 1 coordinates.
inline std::vector<double> to_chart(std::span<const Complex> h) {
    const std::size_t n = h.size();
    std::vector<double> x(2 * n - 1);
    const double m0 = std::abs(h[0]);
    const Complex phase = m0 > 0.0 ? std::conj(h[0]) / m0 : Complex(1.0);
    x[0] = m0;
    for (std::size_t k = 1; k < n; ++k) {
        const Complex z = h[k] * phase;
        x[2 * k - 1] = z.real();
        x[2 * k] = z.imag();
    }
    return x;
}

/// Writes the normalized vector for chart point x; returns false for x = 0.
inline bool from_chart(std::span<const double> x, std::size_t n, Complex* h) {
    h[0] = x[0];
    double s = x[0] * x[0];
    for (std::size_t k = 1; k < n; ++k) {
        h[k] = Complex(x[2 * k - 1], x[2 * k]);
        s += std::norm(h[k]);
    }
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    const double inv = 1.0 / std::sqrt(s);
    for (std::size_t k = 0; k < n; ++k) h[k] *= inv;
    return true;
}

inline ComplexVector chart_vector(std::span<const double> x, std::size_t n) {
    Buffer b;
    if (!from_chart(x, n, b.data())) return {};
    return ComplexVector(b.begin(), b.begin() + n);
}

}  // namespace dnr::detail
