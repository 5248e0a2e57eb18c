#pragma once

#include "dnr/linalg.hpp"

#include <cstdint>

namespace dnr {

/// Counter-based generator: the stream for (seed, index) is fixed regardless
/// of how work is split across threads. Box-Muller is done by hand so the
/// normal variates are identical across standard libraries.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();
    /// Uniform in (0, 1).
    double uniform();
    double normal();
    Complex complex_normal() { return {normal(), normal()}; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Uniformly distributed unit vector in C^n (normalized complex Gaussian).
ComplexVector random_unit_vector(std::size_t n, std::uint64_t seed, std::uint64_t index);

/// Matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix random_gaussian_matrix(std::size_t n, std::uint64_t seed);

/// Haar-ish random unitary from Gram-Schmidt on a Gaussian matrix.
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed);

}  // namespace dnr
