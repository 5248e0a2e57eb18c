#include "dnr/deformed_range.hpp"

#include "dnr/companion.hpp"
#include "dnr/error.hpp"
#include "dnr/optimize.hpp"
#include "dnr/parallel.hpp"
#include "kernels.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

namespace dnr {

namespace {

constexpr double kClampBand = 1e-12;      // relative to ||T||_F^2
constexpr double kPenalty = 4.0;          // weight of sqrt(-delta) outside the domain, per unit of rho

struct Stats {
    double scale2;   // ||T||_F^2
    double scale;    // ||T||_F
    bool hermitian;  // <Th,h> is then real; rounding must not give it a phase
};

bool near_hermitian(const ComplexMatrix& t) {
    return (t - t.adjoint()).max_abs() <= kConfig.hermitian_tol * std::max(1.0, t.max_abs());
}

Stats stats_of(const ComplexMatrix& t) {
    const double f = t.frobenius_norm();
    return {f * f, f, near_hermitian(t)};
}

detail::Quad quad_of(const ComplexMatrix& t, const Stats& st, const Complex* h) {
    detail::Quad q = detail::quad(t, h);
    if (st.hermitian) q.a = q.a.real();
    return q;
}

void require_nonzero(const ComplexMatrix& t) {
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    if (!t.is_finite()) throw Error(ErrorKind::InvalidInput, "matrix has non-finite entries");
    if (t.is_zero()) throw Error(ErrorKind::ZeroMatrix, "the range is defined for nonzero operators only");
    if (t.size() > detail::kMaxDim) throw Error(ErrorKind::InvalidInput, "dimension too large");
}

double delta_of(double r, double abs_a, double nth2) { return r * r * abs_a * abs_a - 4.0 * (r - 1.0) * nth2; }

// Point of the range for one vector, following the domain rules. Returns false
// when h is outside the domain.
bool range_point(const detail::Quad& q, const RhoParam& rho, double scale2, Complex& out) {
    const double r = rho.r();
    const double abs_a = std::abs(q.a);
    if (q.nth2 == 0.0) {
        out = 0.0;
        return true;
    }
    if (abs_a == 0.0) {
        out = 0.0;
        return rho.at_most_two();
    }
    const double d = delta_of(r, abs_a, q.nth2);
    if (d <= -kClampBand * scale2) return false;
    const double f = 0.5 * (r * abs_a + std::sqrt(std::max(d, 0.0)));
    out = f * (q.a / abs_a);
    return true;
}

// Surrogate with the exact penalty outside the feasible set.
double penalized_surrogate(const detail::Quad& q, const RhoParam& rho) {
    const double r = rho.r();
    const double abs_a = std::abs(q.a);
    const double d = delta_of(r, abs_a, q.nth2);
    if (d >= 0.0) return 0.5 * (r * abs_a + std::sqrt(d));
    return 0.5 * r * abs_a - kPenalty * rho.rho() * std::sqrt(-d);
}

// Directional objective Re(exp(-i theta) point), penalized the same way.
double penalized_directional(const detail::Quad& q, const RhoParam& rho, Complex dir) {
    const double r = rho.r();
    const double abs_a = std::abs(q.a);
    if (abs_a == 0.0) {
        if (q.nth2 == 0.0 || rho.at_most_two()) return 0.0;
        return -kPenalty * rho.rho() * std::sqrt(-delta_of(r, 0.0, q.nth2));
    }
    const double proj = (q.a * dir).real() / abs_a;  // cos(arg a - theta)
    const double d = delta_of(r, abs_a, q.nth2);
    if (d >= 0.0) return 0.5 * (r * abs_a + std::sqrt(d)) * proj;
    return 0.5 * r * abs_a * proj - kPenalty * rho.rho() * std::sqrt(-d);
}

struct CloudBuild {
    std::vector<Complex> points;
    std::vector<std::int64_t> origin;  // >= 0: sample index; < 0: -1 - index into extras
    std::vector<ComplexVector> extras;
    CloudStats stats;
};

CloudBuild build_cloud(const ComplexMatrix& t, const RhoParam& rho, std::size_t n_samples, std::uint64_t seed) {
    require_nonzero(t);
    if (n_samples == 0) throw Error(ErrorKind::InvalidInput, "n_samples must be >= 1");
    const std::size_t n = t.size();
    const Stats st = stats_of(t);

    std::vector<Complex> pts(n_samples);
    std::vector<char> ok(n_samples, 0);
    constexpr std::size_t chunk = 4096;
    const std::size_t n_chunks = (n_samples + chunk - 1) / chunk;
    parallel_for(n_chunks, [&](std::size_t c) {
        detail::Buffer h;
        const std::size_t end = std::min(n_samples, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            detail::draw_unit(n, seed, i, h.data());
            ok[i] = range_point(quad_of(t, st, h.data()), rho, st.scale2, pts[i]) ? 1 : 0;
        }
    });

    CloudBuild b;
    b.stats.n_samples = n_samples;
    b.points.reserve(n_samples + n + 1);
    b.origin.reserve(n_samples + n + 1);
    for (std::size_t i = 0; i < n_samples; ++i)
        if (ok[i]) {
            b.points.push_back(pts[i]);
            b.origin.push_back(static_cast<std::int64_t>(i));
        }
    b.stats.n_feasible = b.points.size();

    // Eigenvectors give xi = 1 for every rho, so the eigenvalues themselves are points.
    for (const Complex lambda : spectrum(t).eigenvalues) {
        b.extras.push_back(eigenvector(t, lambda));
        b.points.push_back(st.hermitian ? Complex(lambda.real()) : lambda);
        b.origin.push_back(-static_cast<std::int64_t>(b.extras.size()));
    }
    // A unit h with <Th,h> = 0 gives the origin (xi = 1) when rho <= 2.
    if (rho.at_most_two()) {
        if (auto w = numerical_range_preimage(t, 0.0)) {
            b.extras.push_back(std::move(*w));
            b.points.push_back(0.0);
            b.origin.push_back(-static_cast<std::int64_t>(b.extras.size()));
        }
    }
    return b;
}

ComplexVector witness_of(const CloudBuild& b, std::size_t k, std::size_t n, std::uint64_t seed) {
    const std::int64_t o = b.origin[k];
    if (o >= 0) return random_unit_vector(n, seed, static_cast<std::uint64_t>(o));
    return b.extras[static_cast<std::size_t>(-1 - o)];
}

struct SearchOutcome {
    std::vector<double> x;
    double f = -std::numeric_limits<double>::infinity();
    long evaluations = 0;
};

SearchOutcome maximize_on_sphere(std::size_t n, const std::function<double(const Complex*)>& g,
                                 std::span<const Complex> start, int budget, double step = 0.1) {
    SearchOutcome out;
    auto obj = [&](std::span<const double> x) {
        detail::Buffer h;
        if (!detail::from_chart(x, n, h.data())) return -std::numeric_limits<double>::infinity();
        return g(h.data());
    };
    NelderMeadOptions opt;
    opt.max_evaluations = budget;
    opt.initial_step = step;
    if (n == 1) {
        out.x = detail::to_chart(start);
        out.f = obj(out.x);
        out.evaluations = 1;
        return out;
    }
    auto r = nelder_mead_maximize(obj, detail::to_chart(start), opt);
    out.x = std::move(r.x);
    out.f = r.f;
    out.evaluations = r.evaluations;
    return out;
}

RadiusResult nu_search(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config,
                       std::span<const ComplexVector> extra_starts) {
    require_nonzero(t);
    const std::size_t n = t.size();
    const Stats st = stats_of(t);
    const std::size_t n_samples = config.n_samples ? config.n_samples : default_sample_count(n);

    // Surrogate over the random samples; keep the best indices as starts.
    std::vector<double> fval(n_samples);
    constexpr std::size_t chunk = 4096;
    parallel_for((n_samples + chunk - 1) / chunk, [&](std::size_t c) {
        detail::Buffer h;
        const std::size_t end = std::min(n_samples, (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < end; ++i) {
            detail::draw_unit(n, config.seed, i, h.data());
            fval[i] = penalized_surrogate(quad_of(t, st, h.data()), rho);
        }
    });

    std::vector<ComplexVector> starts(extra_starts.begin(), extra_starts.end());
    std::vector<ComplexVector> eigvecs;
    for (const Complex lambda : spectrum(t).eigenvalues) eigvecs.push_back(eigenvector(t, lambda));
    starts.insert(starts.end(), eigvecs.begin(), eigvecs.end());
    const std::size_t n_starts = std::max<std::size_t>(static_cast<std::size_t>(config.n_starts), starts.size() + 1);
    const std::size_t n_best = std::min(n_samples, std::max<std::size_t>(1, (n_starts - starts.size()) * 3 / 4));
    std::vector<std::size_t> idx(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + n_best, idx.end(), [&](std::size_t a, std::size_t b) {
        return fval[a] > fval[b] || (fval[a] == fval[b] && a < b);
    });
    for (std::size_t k = 0; k < n_best; ++k) starts.push_back(random_unit_vector(n, config.seed, idx[k]));
    for (std::uint64_t k = 0; starts.size() < n_starts; ++k)
        starts.push_back(random_unit_vector(n, config.seed ^ 0x5EED5EEDull, k));

    // For large rho the feasible set near an eigenvector can be a thin cap, so
    // eigenvectors are also searched with small initial simplices.
    std::vector<double> steps(starts.size(), 0.1);
    for (double step : {1e-2, 1e-3, 1e-4})
        for (const auto& v : eigvecs) {
            starts.push_back(v);
            steps.push_back(step);
        }

    auto g = [&](const Complex* h) { return penalized_surrogate(quad_of(t, st, h), rho); };
    std::vector<SearchOutcome> results(starts.size());
    parallel_for(starts.size(), [&](std::size_t k) {
        results[k] = maximize_on_sphere(n, g, starts[k], config.max_evaluations_per_search, steps[k]);
    });

    // Only feasible vectors count; the starts themselves are fallbacks.
    auto feasible_value = [&](const ComplexVector& h) {
        Complex z;
        if (h.empty() || !range_point(quad_of(t, st, h.data()), rho, st.scale2, z))
            return -std::numeric_limits<double>::infinity();
        return surrogate(t, h, rho);
    };
    RadiusResult out;
    out.evaluations = static_cast<long>(n_samples);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < results.size(); ++k) {
        out.evaluations += results[k].evaluations;
        for (const ComplexVector& h : {detail::chart_vector(results[k].x, n), starts[k]}) {
            const double v = feasible_value(h);
            if (v > best) {
                best = v;
                out.witness = h;
            }
        }
    }
    if (out.witness.empty()) throw Error(ErrorKind::ConvergenceFailure, "no feasible vector found");
    const auto q = quad_of(t, st, out.witness.data());
    const double abs_a = std::abs(q.a);
    out.value = best;
    out.point = abs_a > 0.0 ? out.value * (q.a / abs_a) : Complex(out.value);
    return out;
}

}  // namespace

double delta(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho) {
    return evaluate(t, h, rho).delta;
}

double xi(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho) {
    const DomainSample s = evaluate(t, h, rho);
    if (!s.in_domain) throw Error(ErrorKind::OutsideDomain, "h is outside the domain of xi");
    return s.xi;
}

DomainSample evaluate(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho) {
    if (h.size() != t.size()) throw Error(ErrorKind::InvalidInput, "vector length does not match the matrix");
    const double hn = norm(h);
    if (std::abs(hn - 1.0) > kConfig.unit_tol) throw Error(ErrorKind::NotUnit, "h must have unit norm");
    DomainSample s;
    s.h.assign(h.begin(), h.end());
    const ComplexVector th = t * h;
    s.inner = inner(th, h);
    if (near_hermitian(t)) s.inner = s.inner.real();
    s.norm_Th = norm(th);
    const double r = rho.r();
    const double abs_a = std::abs(s.inner);
    s.delta = delta_of(r, abs_a, s.norm_Th * s.norm_Th);
    const double f = t.frobenius_norm();
    s.in_domain = range_point({s.inner, s.norm_Th * s.norm_Th}, rho, f * f, s.point);
    if (s.in_domain) s.xi = abs_a > 0.0 ? 0.5 * (r + std::sqrt(std::max(s.delta, 0.0)) / abs_a) : 1.0;
    return s;
}

double surrogate(const ComplexMatrix& t, std::span<const Complex> h, const RhoParam& rho) {
    const ComplexVector th = t * h;
    const double abs_a = std::abs(inner(th, h));
    const double n = norm(th);
    return 0.5 * (rho.r() * abs_a + std::sqrt(std::max(delta_of(rho.r(), abs_a, n * n), 0.0)));
}

PointCloud sample_cloud(const ComplexMatrix& t, const RhoParam& rho, std::size_t n_samples, std::uint64_t seed,
                        bool keep_witnesses, CloudStats* stats) {
    CloudBuild b = build_cloud(t, rho, n_samples, seed);
    if (stats) *stats = b.stats;
    PointCloud cloud;
    if (keep_witnesses) {
        cloud.witnesses.reserve(b.points.size());
        for (std::size_t k = 0; k < b.points.size(); ++k) cloud.witnesses.push_back(witness_of(b, k, t.size(), seed));
    }
    cloud.points = std::move(b.points);
    return cloud;
}

RadiusResult nu_direct(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config) {
    return nu_search(t, rho, config, {});
}

RangeResult deformed_range(const ComplexMatrix& t, const RhoParam& rho, const SamplerConfig& config) {
    require_nonzero(t);
    const std::size_t n = t.size();
    const std::size_t n_samples = config.n_samples ? config.n_samples : default_sample_count(n);
    const Stats st = stats_of(t);

    CloudBuild b = build_cloud(t, rho, n_samples, config.seed);
    RangeResult res;
    res.rho = rho;
    res.stats = b.stats;
    res.evaluations = static_cast<long>(n_samples);

    // Witnesses of the cloud hull vertices seed the per-direction searches.
    const ConvexRegion hull0 = convex_hull(b.points);
    struct Seed {
        Complex z;
        ComplexVector h;
    };
    std::vector<Seed> seeds;
    {
        auto key = [](Complex z) { return std::bit_cast<std::uint64_t>(z.real()) * 31 ^ std::bit_cast<std::uint64_t>(z.imag()); };
        std::unordered_set<std::uint64_t> wanted;
        for (const Complex v : hull0.vertices()) wanted.insert(key(v));
        std::vector<char> taken(hull0.size(), 0);
        for (std::size_t k = 0; k < b.points.size(); ++k) {
            if (!wanted.count(key(b.points[k]))) continue;
            for (std::size_t j = 0; j < hull0.size(); ++j)
                if (!taken[j] && hull0.vertices()[j] == b.points[k]) {
                    taken[j] = 1;
                    seeds.push_back({b.points[k], witness_of(b, k, n, config.seed)});
                    break;
                }
        }
    }

    const int n_dirs = std::max(config.n_directions, 1);
    const std::size_t per_dir = static_cast<std::size_t>(std::max(config.starts_per_direction, 1));
    std::vector<std::optional<Complex>> refined(static_cast<std::size_t>(n_dirs));
    std::atomic<long> evals{0};
    std::atomic<bool> over_budget{false};
    parallel_for(static_cast<std::size_t>(n_dirs), [&](std::size_t k) {
        if (over_budget.load()) return;
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_dirs;
        const Complex dir = std::polar(1.0, -theta);
        std::vector<std::size_t> order(seeds.size());
        for (std::size_t i = 0; i < seeds.size(); ++i) order[i] = i;
        const std::size_t m = std::min(per_dir, order.size());
        std::partial_sort(order.begin(), order.begin() + m, order.end(), [&](std::size_t a, std::size_t c) {
            const double pa = (seeds[a].z * dir).real(), pc = (seeds[c].z * dir).real();
            return pa > pc || (pa == pc && a < c);
        });
        auto g = [&](const Complex* h) { return penalized_directional(quad_of(t, st, h), rho, dir); };
        SearchOutcome best;
        for (std::size_t s = 0; s < m; ++s) {
            if (seeds[order[s]].h.empty()) continue;
            SearchOutcome o = maximize_on_sphere(n, g, seeds[order[s]].h, config.max_evaluations_per_search);
            evals += o.evaluations;
            if (o.f > best.f) best = std::move(o);
        }
        if (best.x.empty()) return;
        const ComplexVector h = detail::chart_vector(best.x, n);
        Complex z;
        if (!h.empty() && range_point(quad_of(t, st, h.data()), rho, st.scale2, z)) refined[k] = z;
        if (evals.load() > static_cast<long>(config.max_total_evaluations)) over_budget = true;
    });
    res.evaluations += evals.load();
    res.budget_exceeded = over_budget.load();

    std::vector<Complex> all = b.points;
    for (const auto& z : refined)
        if (z) {
            res.refined.push_back(*z);
            all.push_back(*z);
        }
    res.nu_hull = convex_hull(all).max_modulus();

    std::vector<ComplexVector> extra;
    for (const auto& s : seeds)
        if (!s.h.empty()) extra.push_back(s.h);
    std::sort(extra.begin(), extra.end(), [&](const ComplexVector& a, const ComplexVector& c) {
        return surrogate(t, a, rho) > surrogate(t, c, rho);
    });
    extra.resize(std::min<std::size_t>(extra.size(), 8));
    const RadiusResult rad = nu_search(t, rho, config, extra);
    res.evaluations += rad.evaluations;
    res.nu_search = rad.value;
    Complex z;
    if (range_point(quad_of(t, st, rad.witness.data()), rho, st.scale2, z)) all.push_back(rad.point);

    res.region = convex_hull(all);
    res.nu = res.region.max_modulus();
    if (res.evaluations > static_cast<long>(config.max_total_evaluations)) res.budget_exceeded = true;
    res.cloud.points = std::move(b.points);
    if (config.keep_witnesses) {
        res.cloud.witnesses.reserve(res.cloud.points.size());
        for (std::size_t k = 0; k < res.cloud.points.size(); ++k) res.cloud.witnesses.push_back(witness_of(b, k, n, config.seed));
    }
    return res;
}

double domain_threshold(const ComplexMatrix& t, std::span<const Complex> h) {
    const DomainSample s = evaluate(t, h, RhoParam(2.0));
    const double n2 = s.norm_Th * s.norm_Th;
    const double a2 = std::norm(s.inner);
    if (n2 == 0.0 || n2 - a2 <= 1e-14 * n2) return std::numeric_limits<double>::infinity();
    if (a2 == 0.0) return 2.0;
    // delta(r) = a2 r^2 - 4 n2 r + 4 n2; smaller root written without cancellation
    const double r0 = 4.0 * n2 / (2.0 * n2 + 2.0 * std::sqrt(n2 * (n2 - a2)));
    return 2.0 / (2.0 - r0);
}

ClosureReport closure_disagreement(const ComplexMatrix& t, const RhoParam& rho, std::size_t n_samples,
                                   std::uint64_t seed, double open_margin) {
    require_nonzero(t);
    if (n_samples == 0) throw Error(ErrorKind::InvalidInput, "n_samples must be >= 1");
    const std::size_t n = t.size();
    const Stats st = stats_of(t);
    std::vector<Complex> pts(n_samples);
    std::vector<char> closed(n_samples, 0), open(n_samples, 0);
    parallel_for(n_samples, [&](std::size_t i) {
        detail::Buffer h;
        detail::draw_unit(n, seed, i, h.data());
        const detail::Quad q = quad_of(t, st, h.data());
        closed[i] = range_point(q, rho, st.scale2, pts[i]) ? 1 : 0;
        open[i] = closed[i] && delta_of(rho.r(), std::abs(q.a), q.nth2) > open_margin * st.scale2;
    });
    std::vector<Complex> a, b;
    for (const Complex lambda : spectrum(t).eigenvalues) {
        a.push_back(lambda);
        b.push_back(lambda);
    }
    ClosureReport rep;
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (closed[i]) a.push_back(pts[i]);
        if (open[i]) b.push_back(pts[i]);
        rep.n_closed += closed[i];
        rep.n_open += open[i];
    }
    rep.hausdorff = hausdorff_distance(convex_hull(a), convex_hull(b));
    return rep;
}

MonotonicityReport monotonicity_check(const ComplexMatrix& t, const RhoParam& rho1, const RhoParam& rho2,
                                      const SamplerConfig& config, double zero_tol, double inclusion_tol) {
    if (rho2.rho() < rho1.rho()) throw Error(ErrorKind::InvalidInput, "monotonicity check needs rho1 <= rho2");
    const RangeResult a = deformed_range(t, rho1, config);
    const RangeResult b = rho1.rho() == rho2.rho() ? a : deformed_range(t, rho2, config);
    auto locate = [&](const ConvexRegion& e) {
        const double d = signed_depth(e, 0.0);
        if (d > zero_tol) return ZeroLocation::Inside;
        if (d < -zero_tol) return ZeroLocation::Outside;
        return ZeroLocation::Boundary;
    };
    MonotonicityReport rep;
    rep.zero_in_first = locate(a.region);
    rep.zero_in_second = locate(b.region);
    rep.hausdorff = hausdorff_distance(a.region, b.region);
    // Hypotheses: 0 in W^{rho1} (closed set), or 0 in the interior of W^{rho2}.
    const bool h1 = rep.zero_in_first == ZeroLocation::Inside;
    const bool h2 = rep.zero_in_second == ZeroLocation::Inside;
    rep.inconclusive = !h1 && !h2 &&
                       (rep.zero_in_first == ZeroLocation::Boundary || rep.zero_in_second == ZeroLocation::Boundary);
    const auto c = contains(a.region, b.region, inclusion_tol);
    rep.inclusion_margin = c.margin;
    rep.inclusion_holds = c.holds;
    rep.inclusion_asserted = h1 || h2;
    return rep;
}

}  // namespace dnr
