#pragma once

#include "dnr/config.hpp"
#include "dnr/geometry.hpp"
#include "dnr/linalg.hpp"
#include "dnr/rho.hpp"

#include <cstdint>
#include <optional>
#include <span>

namespace dnr {

/// Everything derived from one unit vector h.
struct DomainSample {
    ComplexVector h;
    Complex inner;        // <Th, h>
    double norm_Th = 0.0;
    double delta = 0.0;
    double xi = 0.0;      // meaningful only when in_domain
    Complex point;        // xi * <Th, h>
    bool in_domain = false;
};

/// r^2 |<Th,h>|^2 - 4(r-1) ||Th||^2. Throws NotUnit unless ||h|| = 1 within unit_tol.
double delta(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho);

/// Throws OutsideDomain when h is not in the domain (only possible for rho > 2).
double xi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho);

/// Evaluates all quantities without throwing on domain failure. Samples with
/// delta in (-1e-12 ||T||^2, 0] and <Th,h> != 0 count as feasible, with the
/// square root clamped to zero.
DomainSample evaluate(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho);

/// 0.5 (r |<Th,h>| + sqrt(max(delta, 0))), which equals |xi <Th,h>| where defined.
double surrogate(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho);

struct CloudStats {
    std::size_t n_samples = 0;
    std::size_t n_feasible = 0;
};

/// Points xi(h) <Th,h> for `n_samples` random unit h (sample i drawn from
/// the counter stream (seed, i)), followed by the eigenvector points and,
/// when it belongs to the set, the origin. Witnesses are kept on request;
/// the origin's witness is empty when no vector could be constructed.
PointCloud sample_cloud(const ComplexMatrix& t, const RhoParam& rho, std::size_t n_samples, std::uint64_t seed,
                        bool keep_witnesses = false, CloudStats* stats = nullptr);

struct RadiusResult {
    double value = 0.0;
    ComplexVector witness;  // maximizer of the surrogate
    Complex point;          // the range point realized by the witness (modulus = value)
    long evaluations = 0;
};

/// Multistart maximization of the surrogate over the unit sphere.
RadiusResult nu_direct(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config = {});

struct RangeResult {
    RhoParam rho{1.0};
    PointCloud cloud;
    ConvexRegion region;
    double nu = 0.0;
    CloudStats stats;
    std::vector<Complex> refined;   // one optimized boundary point per direction
    double nu_hull = 0.0;           // max modulus before adding the radius maximizer
    double nu_search = 0.0;         // nu_direct value
    long evaluations = 0;
    bool budget_exceeded = false;
};

/// Hull of the sampled cloud, the per-direction refined boundary points and
/// the radius maximizer. Throws ZeroMatrix for T = 0.
RangeResult deformed_range(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config = {});

/// Largest rho with h in dom(xi_rho), i.e. 2 / (2 - r0) with r0 the smaller
/// root in r of delta. Infinity for eigenvectors (and Th = 0), 2 when <Th,h> = 0.
double domain_threshold(const ComplexMatrix& t, std::span<const Complex> h);

struct ClosureReport {
    std::size_t n_closed = 0;  // samples with delta >= 0 (clamp band included)
    std::size_t n_open = 0;    // samples with delta > open_margin ||T||_F^2
    double hausdorff = 0.0;    // between the hulls of the two point sets, eigenvalues in both
};

/// Compares the range built from delta >= 0 with the one built from delta > 0.
/// Informational only: nothing here locates the finitely many exceptional rho.
ClosureReport closure_disagreement(const ComplexMatrix& t, const RhoParam& rho, std::size_t n_samples,
                                   std::uint64_t seed, double open_margin = 1e-9);

enum class ZeroLocation { Inside, Boundary, Outside };

struct MonotonicityReport {
    ZeroLocation zero_in_first = ZeroLocation::Outside;   // 0 versus W^{rho1}
    ZeroLocation zero_in_second = ZeroLocation::Outside;  // 0 versus W^{rho2}
    bool inconclusive = false;        // 0 within tol of the relevant boundaries
    bool inclusion_asserted = false;  // hypotheses hold, inclusion was tested
    bool inclusion_holds = false;
    double inclusion_margin = 0.0;
    double hausdorff = 0.0;
};

/// Decides where 0 lies relative to W^{rho1} and W^{rho2} and, when either
/// hypothesis of the monotonicity statement holds, tests W^{rho2} in W^{rho1}.
MonotonicityReport monotonicity_check(const ComplexMatrix& t, const RhoParam& rho1, const RhoParam& rho2,
                                      const SamplerConfig& config = {}, double zero_tol = 1e-6,
                                      double inclusion_tol = 5e-3);

}  // namespace dnr
