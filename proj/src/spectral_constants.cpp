#include "dnr/spectral_constants.hpp"

#include "dnr/companion.hpp"
#include "dnr/deformed_range.hpp"
#include "dnr/error.hpp"
#include "dnr/optimize.hpp"
#include "dnr/parallel.hpp"
#include "dnr/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dnr {

namespace {

constexpr std::size_t kSearchBoundary = 1024;
constexpr std::size_t kMaxBoundary = std::size_t{1} << 18;
constexpr double kScanNoise = 1e-3;

double max_abs_on(const Polynomial& p, std::span<const Complex> pts) {
    double m = 0.0;
    for (const Complex z : pts) m = std::max(m, std::abs(p(z)));
    return m;
}

Polynomial from_real(std::span<const double> x) {
    std::vector<Complex> c(x.size() / 2);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = Complex(x[2 * k], x[2 * k + 1]);
    return Polynomial(std::move(c));
}

std::vector<double> to_real(const Polynomial& p, int degree) {
    std::vector<double> x(2 * static_cast<std::size_t>(degree + 1), 0.0);
    const auto& c = p.coefficients();
    for (std::size_t k = 0; k < c.size() && k <= static_cast<std::size_t>(degree); ++k) {
        x[2 * k] = c[k].real();
        x[2 * k + 1] = c[k].imag();
    }
    return x;
}

// (alpha z + beta)^k expanded, times nothing else.
Polynomial linear_power(Complex alpha, Complex beta, int k) {
    std::vector<Complex> c{1.0};
    for (int j = 0; j < k; ++j) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += beta * c[i];
            next[i + 1] += alpha * c[i];
        }
        c = std::move(next);
    }
    return Polynomial(std::move(c));
}

// Chebyshev polynomial T_k(alpha z + beta).
Polynomial chebyshev_on_line(Complex alpha, Complex beta, int k) {
    std::vector<Complex> prev{1.0}, cur{beta, alpha};
    if (k == 0) return Polynomial(prev);
    for (int j = 1; j < k; ++j) {
        std::vector<Complex> next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] += 2.0 * beta * cur[i];
            next[i + 1] += 2.0 * alpha * cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
        prev = std::move(cur);
        cur = std::move(next);
    }
    return Polynomial(std::move(cur));
}

Polynomial rescale(const Polynomial& q, double s) {
    // p(z) = q(z / s)
    std::vector<Complex> c = q.coefficients();
    double f = 1.0;
    for (auto& v : c) {
        v *= f;
        f /= s;
    }
    return Polynomial(std::move(c));
}

Polynomial unit_normalized(const Polynomial& p) {
    std::vector<Complex> c = p.coefficients();
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    s = std::sqrt(s);
    if (s > 0.0)
        for (auto& v : c) v /= s;
    return Polynomial(std::move(c));
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

double sup_on_region(const Polynomial& p, const ConvexRegion& e, std::size_t n_boundary, std::size_t* points_used) {
    if (e.empty()) throw Error(ErrorKind::EmptyRegion, "sup over an empty region");
    if (n_boundary < 256) throw Error(ErrorKind::InvalidInput, "at least 256 boundary points are required");
    std::size_t n = n_boundary;
    double value = max_abs_on(p, boundary_points(e, n));
    while (n < kMaxBoundary) {
        const double next = max_abs_on(p, boundary_points(e, 2 * n));
        n *= 2;
        const bool settled = std::abs(next - value) < 1e-8 * std::max(1.0, next);
        value = std::max(value, next);
        if (settled) break;
    }
    if (points_used) *points_used = n;
    return value;
}

PsiEstimate psi_lower_bound(const ComplexMatrix& t, const RhoParam& rho, int degree, const SamplerConfig& config) {
    const RangeResult range = deformed_range(t, rho, config);
    return psi_lower_bound(t, rho, range.region, degree, config.seed);
}

PsiEstimate psi_lower_bound(const ComplexMatrix& t, const RhoParam& rho, const ConvexRegion& region, int degree,
                            std::uint64_t seed) {
    if (t.is_zero()) throw Error(ErrorKind::ZeroMatrix, "Psi is defined for nonzero operators only");
    if (region.empty()) throw Error(ErrorKind::EmptyRegion, "empty region");
    if (region.size() == 1) throw Error(ErrorKind::DegenerateRegion, "the region is a single point");
    if (degree < 0 || degree > kMaxPolynomialDegree) throw Error(ErrorKind::InvalidInput, "degree out of range");

    // Work in the variable w = z / s so coefficients stay of order one.
    const double s = std::max(region.max_modulus(), 1e-300);
    const ComplexMatrix ts = Complex(1.0 / s) * t;
    const ConvexRegion es = region.scaled(1.0 / s);
    const std::vector<Complex> bpts = boundary_points(es, kSearchBoundary);

    auto ratio_of = [&](const Polynomial& q) {
        const double den = max_abs_on(q, bpts);
        if (!(den > 0.0)) return -std::numeric_limits<double>::infinity();
        return operator_norm(matrix_polynomial(q, ts)) / den;
    };

    // Longest chord of the region for the Chebyshev candidates.
    Complex a = es.vertices().front(), b = es.vertices().back();
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j)
            if (std::abs(es.vertices()[i] - es.vertices()[j]) > std::abs(a - b)) {
                a = es.vertices()[i];
                b = es.vertices()[j];
            }
    const Complex alpha = 2.0 / (b - a), beta = -(a + b) / (b - a);
    const Complex center = es.centroid();

    PsiEstimate est;
    est.rho = rho.rho();
    est.degree = degree;
    est.best = Polynomial({1.0});
    est.ratio = 1.0;
    est.boundary_points_used = 0;

    Polynomial carry({1.0});
    for (int k = 1; k <= degree; ++k) {
        std::vector<Polynomial> starts{carry, Polynomial::monomial(1), Polynomial::monomial(k), linear_power(1.0, -center, k),
                                       chebyshev_on_line(alpha, beta, k)};
        for (std::uint64_t j = 0; j < 4; ++j) {
            CounterRng rng(seed, 0x9517ull * 1000 + static_cast<std::uint64_t>(k) * 16 + j);
            std::vector<Complex> c(static_cast<std::size_t>(k + 1));
            for (auto& v : c) v = rng.complex_normal();
            starts.emplace_back(std::move(c));
        }
        struct Run {
            std::vector<double> x;
            double f = -std::numeric_limits<double>::infinity();
            int evals = 0;
        };
        std::vector<Run> runs(starts.size());
        parallel_for(starts.size(), [&](std::size_t i) {
            NelderMeadOptions opt;
            opt.max_evaluations = 3000;
            opt.initial_step = 0.2;
            opt.f_tol = 1e-12;
            auto r = nelder_mead_maximize([&](std::span<const double> x) { return ratio_of(from_real(x)); },
                                          to_real(starts[i], k), opt);
            runs[i] = {std::move(r.x), r.f, r.evaluations};
        });
        std::size_t best = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            est.evaluations += runs[i].evals;
            if (runs[i].f > runs[best].f || (runs[i].f == runs[best].f && lex_less(runs[i].x, runs[best].x))) best = i;
        }
        est.starts += static_cast<int>(runs.size());
        carry = from_real(runs[best].x);

        // Certified value for this round: dense boundary sampling.
        std::size_t used = 0;
        const double den = sup_on_region(carry, es, kSearchBoundary, &used);
        const double certified = operator_norm(matrix_polynomial(carry, ts)) / den;
        if (certified > est.ratio) {
            est.ratio = certified;
            est.best = unit_normalized(rescale(carry, s));
            est.boundary_points_used = used;
        }
    }
    if (est.boundary_points_used == 0) sup_on_region(est.best, region, kSearchBoundary, &est.boundary_points_used);
    return est;
}

double circle_max(const Polynomial& p, double radius) {
    constexpr int kGrid = 2048;
    std::vector<double> f(kGrid);
    const double step = 2.0 * std::numbers::pi / kGrid;
    for (int k = 0; k < kGrid; ++k) f[static_cast<std::size_t>(k)] = std::abs(p(std::polar(radius, step * k)));
    std::vector<int> idx(kGrid);
    for (int k = 0; k < kGrid; ++k) idx[static_cast<std::size_t>(k)] = k;
    std::partial_sort(idx.begin(), idx.begin() + 3, idx.end(),
                      [&](int a, int b) { return f[static_cast<std::size_t>(a)] > f[static_cast<std::size_t>(b)]; });
    double best = f[static_cast<std::size_t>(idx[0])];
    for (int j = 0; j < 3; ++j) {
        const double c = step * idx[static_cast<std::size_t>(j)];
        double v = 0.0;
        golden_section_maximize([&](double th) { return std::abs(p(std::polar(radius, th))); }, c - step, c + step,
                                1e-12, &v);
        best = std::max(best, v);
    }
    return best;
}

DiscCheckReport disc_spectral_check(const ComplexMatrix& t, const RhoParam& rho, int trials, std::uint64_t seed,
                                    const SamplerConfig& config) {
    return disc_spectral_check(t, rho, nu_direct(t, rho, config).value, trials, seed);
}

DiscCheckReport disc_spectral_check(const ComplexMatrix& t, const RhoParam& rho, double radius, int trials,
                                    std::uint64_t seed) {
    DiscCheckReport rep;
    rep.radius = radius;
    rep.trials = trials;
    std::vector<double> ratio(static_cast<std::size_t>(std::max(trials, 0)));
    std::vector<char> bad(ratio.size(), 0);
    parallel_for(ratio.size(), [&](std::size_t i) {
        CounterRng rng(seed, 0xD15Cull * 100000 + i);
        const int deg = static_cast<int>(rng.next_u64() % 13);
        std::vector<Complex> c(static_cast<std::size_t>(deg + 1));
        for (auto& v : c) v = rng.complex_normal();
        const Polynomial p(std::move(c));
        const double lhs = operator_norm(matrix_polynomial(p, t));
        const double m = circle_max(p, radius);
        bad[i] = lhs > rho.rho() * m + 1e-6;
        ratio[i] = m > 0.0 ? lhs / m : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    });
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        rep.violations += bad[i];
        rep.max_ratio_over_rho = std::max(rep.max_ratio_over_rho, ratio[i] / rho.rho());
    }
    return rep;
}

PsiScan psi_monotonicity_scan(const ComplexMatrix& t, std::span<const double> grid, int degree,
                              const SamplerConfig& config) {
    for (double g : grid)
        if (g < 1.0 || g > 2.0) throw Error(ErrorKind::RhoOutOfRange, "the scan grid must lie in [1, 2]");
    PsiScan scan;
    const ConvexRegion w = numerical_range(t);
    if (w.size() == 1) throw Error(ErrorKind::ZeroNotInterior, "W(T) is a single point");
    if (w.is_degenerate()) {
        const Complex a = w.vertices()[0], b = w.vertices()[1];
        const double off = distance(w, 0.0);
        scan.zero_margin = off > kConfig.geom_tol * std::abs(b - a) ? -off : std::min(std::abs(a), std::abs(b));
    } else {
        scan.zero_margin = signed_depth(w, 0.0);
    }
    if (scan.zero_margin < 1e-3) throw Error(ErrorKind::ZeroNotInterior, "0 is not inside W(T) with margin 1e-3");
    for (double g : grid) scan.rows.push_back({g, psi_lower_bound(t, RhoParam(g), degree, config).ratio});
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        if (scan.rows[i].estimate < scan.rows[i - 1].estimate - 2.0 * kScanNoise) scan.monotone = false;
    return scan;
}

}  // namespace dnr
