#pragma once

#include "dnr/config.hpp"
#include "dnr/linalg.hpp"
#include "dnr/rho.hpp"

#include <optional>
#include <span>
#include <string>

namespace dnr {

/// phi_h(t) = 1 - r |<Th,h>| t + (r - 1) ||Th||^2 t^2.
struct QuadraticPhi {
    double c0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double operator()(double t) const { return c0 + t * (c1 + t * c2); }
    /// Real roots in ascending order of magnitude (smaller first), when c2 != 0
    /// and the discriminant is nonnegative.
    std::optional<std::pair<double, double>> roots() const;
};

QuadraticPhi quadratic_phi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho);
double phi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho, double s);

/// Density of mu_t with respect to ds on the circle xi = R exp(is).
struct MeasureSample {
    double angle = 0.0;
    double radius = 0.0;
    double t = 0.0;
    ComplexMatrix density0;  // (1/2pi) X* (R^2 - T*T) X, X = (xi - T)^-1
    ComplexMatrix density1;  // (1/2pi) (xi X + conj(xi) X*)
    ComplexMatrix density;   // t density1 + (1 - t) density0
    double min_eig = 0.0;
};

/// Throws SingularResolvent when xi is within 1e-8 of an eigenvalue.
MeasureSample measure_density(const ComplexMatrix& t, double radius, double angle, double mix);

struct PositivityScan {
    double min_eig = 0.0;
    double worst_angle = 0.0;
};

/// Smallest eigenvalue of the mu_t density over `n_angles` angles, with a
/// golden-section pass around the lowest grid minima. Angles where the
/// resolvent is singular are skipped.
PositivityScan measure_positivity(const ComplexMatrix& t, double radius, double mix, int n_angles = 720);

struct BisectionResult {
    double value = 0.0;
    bool independent = true;  // false when the measure criterion does not apply (rho > 2)
    int iterations = 0;
};

/// inf{R >= nu_inf : mu_{rho-1} >= 0 on the circle of radius R} by bisection.
/// For rho > 2 the direct search value is returned with independent = false.
BisectionResult nu_by_measure_bisection(const ComplexMatrix& t, const RhoParam& rho, double tol = 1e-7,
                                        const SamplerConfig& config = {});

enum class Verdict { In, Out, Inconclusive };
const char* to_string(Verdict v);

struct MembershipCertificate {
    Verdict verdict = Verdict::Inconclusive;
    double radius = 0.0;          // nu_rho from the direct search
    double margin = 0.0;          // 1 - radius
    bool boundary = false;        // |radius - 1| <= tol
    ComplexVector witness;        // maximizer of |xi <Th,h>|
    std::optional<double> measure_min_eig;  // at R = 1, rho <= 2 and spectral radius < 1
    double worst_angle = 0.0;
};

/// T in C_rho iff nu_rho(T) <= 1. The measure test at R = 1 is a cross-check;
/// disagreement between the two gives Inconclusive.
MembershipCertificate c_rho_membership(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config = {},
                                       double tol = 1e-6);

}  // namespace dnr
