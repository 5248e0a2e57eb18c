#pragma once

#include "dnr/config.hpp"
#include "dnr/geometry.hpp"
#include "dnr/linalg.hpp"
#include "dnr/rho.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dnr {

/// max |p| over the boundary of E. Starts from `n_boundary` points and doubles
/// until the value changes by less than 1e-8 (relative). `points_used`
/// receives the final sample size.
double sup_on_region(const Polynomial& p, const ConvexRegion& e, std::size_t n_boundary = 1024,
                     std::size_t* points_used = nullptr);

struct PsiEstimate {
    double rho = 1.0;
    int degree = 0;
    Polynomial best;           // coefficients normalized to a unit vector
    double ratio = 1.0;        // ||p(T)|| / sup over the region of |p|
    std::size_t boundary_points_used = 0;
    int starts = 0;
    long evaluations = 0;
};

/// Lower bound for Psi_rho(T) from a multistart search over polynomials of
/// degree <= d. Degrees are searched in increasing order, each seeded with the
/// previous optimum, so the estimate never decreases with d.
PsiEstimate psi_lower_bound(const ComplexMatrix& t, const RhoParam& rho, int degree, const SamplerConfig& config = {});
PsiEstimate psi_lower_bound(const ComplexMatrix& t, const RhoParam& rho, const ConvexRegion& region, int degree,
                            std::uint64_t seed);

struct DiscCheckReport {
    double radius = 0.0;          // nu_rho(T)
    int trials = 0;
    int violations = 0;
    double max_ratio_over_rho = 0.0;
};

/// Random polynomials (degree <= 12, standard complex Gaussian coefficients)
/// tested against ||p(T)|| <= rho max_{|z| = nu_rho} |p(z)| + 1e-6.
DiscCheckReport disc_spectral_check(const ComplexMatrix& t, const RhoParam& rho, int trials, std::uint64_t seed,
                                    const SamplerConfig& config = {});
DiscCheckReport disc_spectral_check(const ComplexMatrix& t, const RhoParam& rho, double radius, int trials,
                                    std::uint64_t seed);

/// max |p(z)| on the circle |z| = radius (dense grid plus golden-section refinement).
double circle_max(const Polynomial& p, double radius);

struct PsiScanRow {
    double rho = 1.0;
    double estimate = 1.0;
};

struct PsiScan {
    std::vector<PsiScanRow> rows;
    bool monotone = true;       // no drop larger than twice the search noise
    double zero_margin = 0.0;   // depth of 0 in W(T) (relative interior for segments)
};

/// Runs psi_lower_bound over a grid in [1, 2]. Requires 0 in the interior of
/// W(T) with margin >= 1e-3 (relative interior when W(T) is a segment).
PsiScan psi_monotonicity_scan(const ComplexMatrix& t, std::span<const double> grid, int degree,
                              const SamplerConfig& config = {});

}  // namespace dnr
