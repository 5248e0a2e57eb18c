#pragma once

#include "dnr/geometry.hpp"
#include "dnr/linalg.hpp"
#include "dnr/rho.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dnr {

/// lambda_max of Re(exp(-i theta) T), the support function of W(T).
double numerical_range_support(const ComplexMatrix& t, double theta);

/// Hull of <T h_theta, h_theta> for the top eigenvectors h_theta of
/// Re(exp(-i theta) T) over `n_angles` directions.
ConvexRegion numerical_range(const ComplexMatrix& t, int n_angles = 720);

/// max over theta of lambda_max(Re(exp(-i theta) M)), grid plus golden-section refinement.
double numerical_radius(const ComplexMatrix& m, int n_angles = 720);

/// Unit h with <Th, h> = w, or nullopt when w is not in W(T) (up to `tol` relative to ||T||).
std::optional<ComplexVector> numerical_range_preimage(const ComplexMatrix& t, Complex w, double tol = 1e-9);

/// [[0, 2 sqrt((2 - rho)/rho)], [0, 2 (rho - 1)/rho]] for rho in [1, 2].
ComplexMatrix b_rho(const RhoParam& rho);

/// Numerical radius of B_rho (x) T. Throws RhoOutOfRange for rho > 2.
double mo_radius(const ComplexMatrix& t, const RhoParam& rho);
ConvexRegion mo_range(const ComplexMatrix& t, const RhoParam& rho, int n_angles = 720);

struct ProductExcess {
    double excess = 0.0;  // max distance from a vertex of W^rho to conv(W(B_rho) W(T)); 0 when inside
    Complex point;        // the vertex attaining it
    bool witness = false; // excess > tol, so the point is outside the product set itself
};

/// Looks for a point of `w_rho` outside the product set W(B_rho) W(T). The hull
/// of the product is built from the boundary vertices of both factors.
ProductExcess product_range_excess(const ComplexMatrix& t, const RhoParam& rho, const ConvexRegion& w_rho,
                                   double tol = 1e-3, int n_angles = 360);

struct QRange {
    PointCloud cloud;      // samples of W(T:q)
    ConvexRegion region;   // W(T:q)
    ConvexRegion scaled;   // W(T:q) / q
};

/// Samples q<Th,h> + sqrt(1-q^2) w sqrt(||Th||^2 - |<Th,h>|^2) with w on 32
/// phases and w = 0, plus one optimized support point per direction.
QRange q_numerical_range(const ComplexMatrix& t, double q, std::size_t n_samples, std::uint64_t seed,
                         int n_directions = 360);

struct ShellPoint {
    double re = 0.0;
    double im = 0.0;
    double norm2 = 0.0;  // ||Th||^2
    ComplexVector h;
};

std::vector<ShellPoint> dw_shell(const ComplexMatrix& t, std::size_t n_samples, std::uint64_t seed);

/// sup |<Tx,x>| / (||Tx|| ||x||) over samples with Tx != 0; for nilpotent T
/// the vectors f1 + t f2 built from a Jordan chain are included.
double normalized_range_sup(const ComplexMatrix& t, std::size_t n_samples, std::uint64_t seed);

struct GapReport {
    double min_modulus = 0.0;       // over cloud points with nonzero modulus
    double bound = 0.0;             // sqrt(1 - r) sigma_min
    double alt_radicand = 0.0;      // 2 / rho^2 - 1
    std::optional<double> alt_bound;  // sqrt(alt_radicand) sigma_min when the radicand is >= 0
    double sigma_min = 0.0;
    std::size_t n_points = 0;
    bool holds = false;             // min_modulus >= bound - 1e-9
};

/// Lower bound on the modulus of the points xi(h)<Th,h> with <Th,h> != 0.
GapReport v_rho_gap(const ComplexMatrix& t, const RhoParam& rho, const PointCloud& cloud);

/// Number of connected components of the graph joining points closer than eps.
std::size_t cloud_components(std::span<const Complex> points, double eps);

}  // namespace dnr
