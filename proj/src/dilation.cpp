#include "dnr/dilation.hpp"

#include "dnr/deformed_range.hpp"
#include "dnr/error.hpp"
#include "dnr/optimize.hpp"
#include "dnr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dnr {

namespace {

constexpr double kInvTwoPi = 0.5 / std::numbers::pi;
constexpr double kPositivityFloor = -1e-9;

struct Resolvent {
    const ComplexMatrix& t;
    ComplexMatrix gram;            // T* T
    std::vector<Complex> eigenvalues;
};

// Fills the sample for angle s; returns false when the resolvent is singular there.
bool density_at(const Resolvent& rs, double radius, double s, double mix, MeasureSample& out) {
    const std::size_t n = rs.t.size();
    const Complex xi = std::polar(radius, s);
    const double guard = 1e-8 * std::max(1.0, radius);
    for (const Complex lambda : rs.eigenvalues)
        if (std::abs(xi - lambda) <= guard) return false;
    ComplexMatrix shifted = Complex(-1.0) * rs.t;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += xi;
    ComplexMatrix x;
    if (!try_inverse(shifted, x, 1e-300)) return false;
    const ComplexMatrix xh = x.adjoint();

    ComplexMatrix middle = Complex(-1.0) * rs.gram;
    for (std::size_t i = 0; i < n; ++i) middle(i, i) += radius * radius;
    ComplexMatrix d0 = xh * middle * x;
    d0 *= kInvTwoPi;
    const double skew = (d0 - d0.adjoint()).max_abs();
    if (skew > 1e-10 * std::max(d0.max_abs(), 1e-300) && skew > 1e-14)
        throw Error(ErrorKind::NotHermitian, "measure density lost Hermitian symmetry");
    d0 = d0.hermitian_part();

    ComplexMatrix d1 = xi * x + std::conj(xi) * xh;
    d1 *= kInvTwoPi;

    out.angle = s;
    out.radius = radius;
    out.t = mix;
    out.density = mix * d1 + (1.0 - mix) * d0;
    out.density0 = std::move(d0);
    out.density1 = std::move(d1);
    out.min_eig = hermitian_eigs(out.density).values.front();
    return true;
}

double min_eig_at(const Resolvent& rs, double radius, double s, double mix) {
    MeasureSample m;
    if (!density_at(rs, radius, s, mix, m)) return std::numeric_limits<double>::infinity();
    return m.min_eig;
}

Resolvent make_resolvent(const ComplexMatrix& t) {
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    return {t, t.adjoint() * t, spectrum(t).eigenvalues};
}

PositivityScan scan(const Resolvent& rs, double radius, double mix, int n_angles) {
    const double step = 2.0 * std::numbers::pi / n_angles;
    std::vector<double> f(static_cast<std::size_t>(n_angles));
    parallel_for(f.size(), [&](std::size_t k) { f[k] = min_eig_at(rs, radius, step * static_cast<double>(k), mix); });

    std::vector<std::size_t> lows;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double prev = f[(k + f.size() - 1) % f.size()], next = f[(k + 1) % f.size()];
        if (std::isfinite(f[k]) && f[k] <= prev && f[k] <= next) lows.push_back(k);
    }
    std::sort(lows.begin(), lows.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b] || (f[a] == f[b] && a < b); });
    lows.resize(std::min<std::size_t>(lows.size(), 3));

    PositivityScan out{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t k = 0; k < f.size(); ++k)
        if (f[k] < out.min_eig) {
            out.min_eig = f[k];
            out.worst_angle = step * static_cast<double>(k);
        }
    for (std::size_t k : lows) {
        const double c = step * static_cast<double>(k);
        double v = 0.0;
        const double s = golden_section_maximize([&](double a) { return -min_eig_at(rs, radius, a, mix); }, c - step,
                                                 c + step, 1e-9, &v);
        if (-v < out.min_eig) {
            out.min_eig = -v;
            out.worst_angle = std::fmod(s + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
        }
    }
    return out;
}

}  // namespace

std::optional<std::pair<double, double>> QuadraticPhi::roots() const {
    if (c2 == 0.0) {
        if (c1 == 0.0) return std::nullopt;
        return std::make_pair(-c0 / c1, std::numeric_limits<double>::infinity());
    }
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return std::nullopt;
    const double q = -0.5 * (c1 + (c1 <= 0.0 ? -1.0 : 1.0) * std::sqrt(disc));
    if (q == 0.0) return std::nullopt;
    double a = c0 / q, b = q / c2;
    if (std::abs(b) < std::abs(a)) std::swap(a, b);
    return std::make_pair(a, b);
}

QuadraticPhi quadratic_phi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho) {
    const DomainSample s = evaluate(t, h, rho);
    const double r = rho.r();
    return {1.0, -r * std::abs(s.inner), (r - 1.0) * s.norm_Th * s.norm_Th};
}

double phi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho, double s) {
    return quadratic_phi(t, h, rho)(s);
}

MeasureSample measure_density(const ComplexMatrix& t, double radius, double angle, double mix) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
    if (!(mix >= 0.0 && mix <= 1.0)) throw Error(ErrorKind::InvalidInput, "t must lie in [0, 1]");
    const Resolvent rs = make_resolvent(t);
    MeasureSample m;
    if (!density_at(rs, radius, angle, mix, m))
        throw Error(ErrorKind::SingularResolvent, "the circle passes through the spectrum");
    return m;
}

PositivityScan measure_positivity(const ComplexMatrix& t, double radius, double mix, int n_angles) {
    if (!(radius > 0.0)) throw Error(ErrorKind::InvalidInput, "radius must be positive");
    return scan(make_resolvent(t), radius, mix, n_angles);
}

BisectionResult nu_by_measure_bisection(const ComplexMatrix& t, const RhoParam& rho, double tol,
                                        const SamplerConfig& config) {
    if (t.is_zero()) throw Error(ErrorKind::ZeroMatrix, "the radius is defined for nonzero operators only");
    BisectionResult res;
    if (!rho.at_most_two()) {
        res.value = nu_direct(t, rho, config).value;
        res.independent = false;
        return res;
    }
    const Resolvent rs = make_resolvent(t);
    const double mix = rho.rho() - 1.0;
    auto positive = [&](double radius) { return scan(rs, radius, mix, 720).min_eig >= kPositivityFloor; };

    double lo = 0.0;
    for (const Complex lambda : rs.eigenvalues) lo = std::max(lo, std::abs(lambda));
    lo = std::max(lo, 1e-12);
    double hi = operator_norm(t) * (1.0 + 1e-6);
    if (!positive(hi)) throw Error(ErrorKind::BracketFailure, "measure is not positive at the norm");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        ++res.iterations;
        if (positive(mid)) hi = mid;
        else lo = mid;
    }
    res.value = 0.5 * (lo + hi);
    return res;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::In: return "in";
        case Verdict::Out: return "out";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

MembershipCertificate c_rho_membership(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config,
                                       double tol) {
    const RadiusResult rad = nu_direct(t, rho, config);
    MembershipCertificate c;
    c.radius = rad.value;
    c.margin = 1.0 - rad.value;
    c.witness = rad.witness;
    c.boundary = std::abs(rad.value - 1.0) <= tol;
    const bool direct_in = rad.value <= 1.0 + tol;

    std::optional<bool> measure_in;
    if (rho.at_most_two() && spectral_radius(t) < 1.0) {
        const auto s = measure_positivity(t, 1.0, rho.rho() - 1.0);
        c.measure_min_eig = s.min_eig;
        c.worst_angle = s.worst_angle;
        measure_in = s.min_eig >= kPositivityFloor;
    }

    if (c.boundary) {
        // Both criteria are at their threshold; only a clear measure violation overrides.
        c.verdict = c.measure_min_eig && *c.measure_min_eig < -1e-6 ? Verdict::Inconclusive : Verdict::In;
    } else if (measure_in && *measure_in != direct_in) {
        c.verdict = Verdict::Inconclusive;
    } else {
        c.verdict = direct_in ? Verdict::In : Verdict::Out;
    }
    return c;
}

}  // namespace dnr
