#pragma once

#include <cstddef>
#include <cstdint>

namespace dnr {

/// Numerical tolerances shared by every module. Tests reference these
/// values instead of repeating literals.
struct Config {
    double eigen_tol = 1e-10;
    double geom_tol = 1e-9;
    double hermitian_tol = 1e-12;
    double unit_tol = 1e-10;
    int jacobi_max_sweeps = 100;
    int qr_max_iterations_per_eigenvalue = 60;
};

inline constexpr Config kConfig{};

/// Budget for the sampled/optimized range computations.
struct SamplerConfig {
    std::size_t n_samples = 0;       // 0: pick the default for the dimension
    std::uint64_t seed = 42;
    int n_directions = 360;          // boundary refinement directions
    int n_starts = 64;               // multistart count for the radius search
    int starts_per_direction = 3;
    int max_evaluations_per_search = 4000;
    std::size_t max_total_evaluations = 200'000'000;
    bool keep_witnesses = false;
};

/// Default number of sampled unit vectors for an n-dimensional operator.
inline std::size_t default_sample_count(std::size_t n) {
    if (n <= 4) return 200'000;
    return 100'000;
}

}  // namespace dnr
