#include "dnr/companion.hpp"

#include "dnr/error.hpp"
#include "dnr/optimize.hpp"
#include "dnr/parallel.hpp"
#include "kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

namespace dnr {

namespace {

ComplexMatrix rotated_real_part(const ComplexMatrix& t, double theta) {
    const std::size_t n = t.size();
    const Complex e = std::polar(1.0, -theta);
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (e * t(i, j) + std::conj(e * t(j, i)));
    return a;
}

void require_rho_at_most_two(const RhoParam& rho) {
    if (rho.rho() > 2.0) throw Error(ErrorKind::RhoOutOfRange, "B_rho is defined for rho in [1, 2]");
}

// Orthonormal basis of span{u, v}; one vector when they are parallel.
std::vector<ComplexVector> orthonormal_pair(ComplexVector u, ComplexVector v) {
    normalize(u);
    const Complex p = inner(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= p * u[i];
    if (norm(v) <= 1e-10) return {u};
    normalize(v);
    return {u, v};
}

// Unit y in C^2 with y* b y = 0, assuming 0 is in W(b).
ComplexVector zero_of_2x2(const ComplexMatrix& b) {
    const ComplexMatrix h = b.hermitian_part();
    ComplexMatrix k(2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) k(i, j) = (b(i, j) - std::conj(b(j, i))) / Complex(0.0, 2.0);

    // Balance two eigenvectors of a Hermitian matrix so that its form vanishes.
    auto balance = [](const HermitianEigensystem& es, double& alpha, double& beta) {
        const double lo = std::min(es.values[0], 0.0), hi = std::max(es.values[1], 0.0);
        const double gap = hi - lo;
        alpha = gap > 0.0 ? std::sqrt(hi / gap) : 1.0;
        beta = gap > 0.0 ? std::sqrt(-lo / gap) : 0.0;
    };
    const double scale = std::max(b.max_abs(), 1e-300);
    const auto eh = hermitian_eigs(h);
    if (eh.values[1] - eh.values[0] <= 1e-14 * scale) {
        const auto ek = hermitian_eigs(k);
        double alpha, beta;
        balance(ek, alpha, beta);
        ComplexVector y(2);
        for (std::size_t i = 0; i < 2; ++i) y[i] = alpha * ek.vectors[0][i] + beta * ek.vectors[1][i];
        return y;
    }
    double alpha, beta;
    balance(eh, alpha, beta);
    const ComplexVector& umin = eh.vectors[0];
    const ComplexVector& umax = eh.vectors[1];
    const ComplexVector kmax = k * umax;
    const ComplexVector kmin = k * umin;
    const double c0 = alpha * alpha * inner(kmin, umin).real() + beta * beta * inner(kmax, umax).real();
    const Complex k12 = inner(kmax, umin);  // umin* K umax
    const double amp = 2.0 * alpha * beta * std::abs(k12);
    double phi = 0.0;
    if (amp > 0.0) phi = std::acos(std::clamp(-c0 / amp, -1.0, 1.0)) - std::arg(k12);
    const Complex e = std::polar(1.0, phi);
    ComplexVector y(2);
    for (std::size_t i = 0; i < 2; ++i) y[i] = alpha * umin[i] + beta * e * umax[i];
    return y;
}

// Unit vector in span{u, v} with <By, y> = c, where c lies in W of the compression.
ComplexVector preimage_in_span(const ComplexMatrix& b, const ComplexVector& u, const ComplexVector& v, Complex c) {
    const auto basis = orthonormal_pair(u, v);
    if (basis.size() == 1) return basis[0];
    ComplexMatrix a(2);
    for (std::size_t i = 0; i < 2; ++i) {
        const ComplexVector bx = b * basis[i];
        for (std::size_t j = 0; j < 2; ++j) a(j, i) = inner(bx, basis[j]);
    }
    a(0, 0) -= c;
    a(1, 1) -= c;
    const ComplexVector y = zero_of_2x2(a);
    ComplexVector out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[0] * basis[0][i] + y[1] * basis[1][i];
    normalize(out);
    return out;
}

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

}  // namespace

double numerical_range_support(const ComplexMatrix& t, double theta) {
    return hermitian_top(rotated_real_part(t, theta)).value;
}

ConvexRegion numerical_range(const ComplexMatrix& t, int n_angles) {
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    if (n_angles < 16) throw Error(ErrorKind::InvalidInput, "numerical range needs at least 16 angles");
    std::vector<Complex> pts(static_cast<std::size_t>(n_angles));
    parallel_for(pts.size(), [&](std::size_t k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_angles;
        const auto top = hermitian_top(rotated_real_part(t, theta));
        pts[k] = inner(t * top.vector, top.vector);
    });
    return convex_hull(pts);
}

double numerical_radius(const ComplexMatrix& m, int n_angles) {
    if (m.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    if (m.is_zero()) return 0.0;
    std::vector<double> f(static_cast<std::size_t>(n_angles));
    const double step = 2.0 * std::numbers::pi / n_angles;
    parallel_for(f.size(), [&](std::size_t k) { f[k] = numerical_range_support(m, step * static_cast<double>(k)); });

    // Refine the four largest local maxima of the grid.
    std::vector<std::size_t> peaks;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double prev = f[(k + f.size() - 1) % f.size()], next = f[(k + 1) % f.size()];
        if (f[k] >= prev && f[k] >= next) peaks.push_back(k);
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b] || (f[a] == f[b] && a < b); });
    peaks.resize(std::min<std::size_t>(peaks.size(), 4));
    double best = *std::max_element(f.begin(), f.end());
    for (std::size_t k : peaks) {
        const double c = step * static_cast<double>(k);
        double v = 0.0;
        golden_section_maximize([&](double th) { return numerical_range_support(m, th); }, c - step, c + step, 1e-10, &v);
        best = std::max(best, v);
    }
    return best;
}

std::optional<ComplexVector> numerical_range_preimage(const ComplexMatrix& t, Complex w, double tol) {
    const std::size_t n = t.size();
    ComplexMatrix b = t;
    for (std::size_t i = 0; i < n; ++i) b(i, i) -= w;
    const double scale = std::max({t.frobenius_norm(), std::abs(w), 1e-300});
    const double eps = tol * scale;

    constexpr int kAngles = 720;
    std::vector<Complex> p(kAngles);
    std::vector<ComplexVector> v(kAngles);
    std::vector<double> h(kAngles);
    parallel_for(kAngles, [&](std::size_t k) {
        const auto top = hermitian_top(rotated_real_part(b, 2.0 * std::numbers::pi * static_cast<double>(k) / kAngles));
        h[k] = top.value;
        v[k] = top.vector;
        p[k] = inner(b * top.vector, top.vector);
    });
    if (*std::min_element(h.begin(), h.end()) < -eps) return std::nullopt;

    auto accept = [&](const ComplexVector& y) -> std::optional<ComplexVector> {
        if (y.size() == n && std::abs(inner(b * y, y)) <= eps) return y;
        return std::nullopt;
    };
    std::size_t far = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (std::abs(p[k]) <= eps) return v[k];
        if (std::abs(p[k]) > std::abs(p[far])) far = k;
    }

    // Collinear boundary: 0 lies between the two extreme points of the line.
    const std::vector<Complex> pv(p.begin(), p.end());
    const ConvexRegion hull = convex_hull(pv);
    if (hull.is_degenerate()) {
        const Complex dir = p[far] / std::abs(p[far]);
        std::size_t opp = 0;
        for (std::size_t k = 0; k < p.size(); ++k)
            if ((p[k] * std::conj(dir)).real() < (p[opp] * std::conj(dir)).real()) opp = k;
        return accept(preimage_in_span(b, v[far], v[opp], 0.0));
    }

    // The ray from p[far] through 0 leaves the sampled boundary polygon on the
    // far side at q, inside some edge [p_j, p_j+1]. Realize q, then 0 on [p_far, q].
    const Complex d = -p[far] / std::abs(p[far]);
    double best_s = -1.0;
    std::size_t best_j = 0;
    double best_u = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Complex a = p[j], e = p[(j + 1) % p.size()] - p[j];
        const double den = cross(e, d);
        if (std::abs(den) < 1e-300) continue;
        const double u = cross(d, a) / den;   // a + u e = s d
        if (u < -1e-12 || u > 1.0 + 1e-12) continue;
        const double s = cross(e, a) / den;
        if (s > best_s) {
            best_s = s;
            best_j = j;
            best_u = std::clamp(u, 0.0, 1.0);
        }
    }
    if (best_s < 0.0) return std::nullopt;
    const std::size_t j1 = (best_j + 1) % p.size();
    const Complex q = p[best_j] + best_u * (p[j1] - p[best_j]);
    const ComplexVector y = preimage_in_span(b, v[best_j], v[j1], q);
    return accept(preimage_in_span(b, v[far], y, 0.0));
}

ComplexMatrix b_rho(const RhoParam& rho) {
    require_rho_at_most_two(rho);
    const double p = rho.rho();
    return ComplexMatrix{{0.0, 2.0 * std::sqrt((2.0 - p) / p)}, {0.0, 2.0 * (p - 1.0) / p}};
}

double mo_radius(const ComplexMatrix& t, const RhoParam& rho) { return numerical_radius(kron(b_rho(rho), t)); }

ConvexRegion mo_range(const ComplexMatrix& t, const RhoParam& rho, int n_angles) {
    return numerical_range(kron(b_rho(rho), t), n_angles);
}

ProductExcess product_range_excess(const ComplexMatrix& t, const RhoParam& rho, const ConvexRegion& w_rho,
                                   double tol, int n_angles) {
    require_rho_at_most_two(rho);
    if (w_rho.empty()) throw Error(ErrorKind::EmptyRegion, "empty range");
    // conv(A B) = conv(ext A ext B): the product is linear in each factor.
    const ConvexRegion wb = numerical_range(b_rho(rho), n_angles);
    const ConvexRegion wt = numerical_range(t, n_angles);
    std::vector<Complex> prod;
    prod.reserve(wb.size() * wt.size());
    for (const Complex b : wb.vertices())
        for (const Complex w : wt.vertices()) prod.push_back(b * w);
    const ConvexRegion hull = convex_hull(prod);
    ProductExcess out;
    for (const Complex z : w_rho.vertices()) {
        const double d = distance(hull, z);
        if (d > out.excess) {
            out.excess = d;
            out.point = z;
        }
    }
    out.witness = out.excess > tol * std::max(1.0, w_rho.max_modulus());
    return out;
}

QRange q_numerical_range(const ComplexMatrix& t, double q, std::size_t n_samples, std::uint64_t seed,
                         int n_directions) {
    if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorKind::QOutOfRange, "q must lie in (0, 1]");
    if (t.empty() || n_samples == 0) throw Error(ErrorKind::InvalidInput, "empty matrix or no samples");
    const std::size_t n = t.size();
    const double c = std::sqrt(std::max(0.0, 1.0 - q * q));
    constexpr int kPhases = 32;

    std::vector<detail::Quad> qs(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        detail::Buffer h;
        detail::draw_unit(n, seed, i, h.data());
        qs[i] = detail::quad(t, h.data());
    });
    auto spread = [&](const detail::Quad& s) { return c * std::sqrt(std::max(0.0, s.nth2 - std::norm(s.a))); };

    QRange out;
    out.cloud.points.reserve(n_samples * (kPhases + 1));
    for (const auto& s : qs) {
        const Complex center = q * s.a;
        const double rad = spread(s);
        out.cloud.add(center);
        if (rad > 0.0)
            for (int k = 0; k < kPhases; ++k) out.cloud.add(center + std::polar(rad, 2.0 * std::numbers::pi * k / kPhases));
    }

    // Support point in direction theta: w = exp(i theta).
    std::vector<Complex> refined(static_cast<std::size_t>(n_directions));
    parallel_for(refined.size(), [&](std::size_t k) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_directions;
        const Complex dir = std::polar(1.0, -theta);
        auto value = [&](const detail::Quad& s) { return q * (s.a * dir).real() + spread(s); };
        std::size_t best = 0;
        for (std::size_t i = 1; i < qs.size(); ++i)
            if (value(qs[i]) > value(qs[best])) best = i;
        auto obj = [&](std::span<const double> x) {
            detail::Buffer h;
            if (!detail::from_chart(x, n, h.data())) return -std::numeric_limits<double>::infinity();
            return value(detail::quad(t, h.data()));
        };
        const ComplexVector h0 = random_unit_vector(n, seed, best);
        std::vector<double> x = detail::to_chart(h0);
        if (n > 1) x = nelder_mead_maximize(obj, x).x;
        detail::Buffer h;
        detail::from_chart(x, n, h.data());
        const auto s = detail::quad(t, h.data());
        refined[k] = q * s.a + spread(s) * std::polar(1.0, theta);
    });
    for (const Complex z : refined) out.cloud.add(z);
    out.region = convex_hull(out.cloud);
    out.scaled = out.region.scaled(1.0 / q);
    return out;
}

std::vector<ShellPoint> dw_shell(const ComplexMatrix& t, std::size_t n_samples, std::uint64_t seed) {
    std::vector<ShellPoint> out(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        ShellPoint& s = out[i];
        s.h = random_unit_vector(t.size(), seed, i);
        const auto qd = detail::quad(t, s.h.data());
        s.re = qd.a.real();
        s.im = qd.a.imag();
        s.norm2 = qd.nth2;
    });
    return out;
}

double normalized_range_sup(const ComplexMatrix& t, std::size_t n_samples, std::uint64_t seed) {
    if (t.empty()) throw Error(ErrorKind::InvalidInput, "empty matrix");
    if (t.is_zero()) throw Error(ErrorKind::ZeroMatrix, "normalized range of the zero operator");
    const std::size_t n = t.size();
    auto ratio = [&](const ComplexVector& x) {
        const ComplexVector tx = t * x;
        const double ntx = norm(tx), nx = norm(x);
        if (ntx == 0.0 || nx == 0.0) return 0.0;
        return std::abs(inner(tx, x)) / (ntx * nx);
    };
    std::vector<double> best(n_samples);
    parallel_for(n_samples, [&](std::size_t i) { best[i] = ratio(random_unit_vector(n, seed, i)); });
    double sup = n_samples ? *std::max_element(best.begin(), best.end()) : 0.0;

    for (const Complex lambda : spectrum(t).eigenvalues) sup = std::max(sup, ratio(eigenvector(t, lambda)));

    // Jordan-chain vectors of a nilpotent T: f1 = T^k v, f2 = T^{k-1} v with T^{k+1} = 0.
    const double tn = t.max_abs();
    std::vector<ComplexMatrix> powers{ComplexMatrix::identity(n), t};
    while (powers.size() <= n && powers.back().max_abs() > 1e-12 * std::pow(tn, powers.size() - 1))
        powers.push_back(powers.back() * t);
    if (powers.back().max_abs() <= 1e-12 * std::pow(tn, powers.size() - 1) && powers.size() >= 3) {
        const std::size_t k = powers.size() - 2;  // T^k != 0, T^{k+1} = 0
        std::size_t col = 0;
        double cmax = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::norm(powers[k](i, j));
            if (s > cmax) {
                cmax = s;
                col = j;
            }
        }
        ComplexVector f1(n), f2(n);
        for (std::size_t i = 0; i < n; ++i) {
            f1[i] = powers[k](i, col);
            f2[i] = powers[k - 1](i, col);
        }
        normalize(f1);
        normalize(f2);
        for (double s = 1e-1; s >= 1e-6 * 0.99; s *= 0.1) {
            ComplexVector x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = f1[i] + s * f2[i];
            sup = std::max(sup, ratio(x));
        }
    }
    return sup;
}

GapReport v_rho_gap(const ComplexMatrix& t, const RhoParam& rho, const PointCloud& cloud) {
    require_rho_at_most_two(rho);
    GapReport g;
    g.sigma_min = singular_values(t).back();
    g.bound = std::sqrt(std::max(0.0, 1.0 - rho.r())) * g.sigma_min;
    g.alt_radicand = 2.0 / (rho.rho() * rho.rho()) - 1.0;
    if (g.alt_radicand >= 0.0) g.alt_bound = std::sqrt(g.alt_radicand) * g.sigma_min;
    g.min_modulus = std::numeric_limits<double>::infinity();
    for (const Complex z : cloud.points) {
        const double m = std::abs(z);
        if (m == 0.0) continue;
        g.min_modulus = std::min(g.min_modulus, m);
        ++g.n_points;
    }
    g.holds = g.n_points == 0 || g.min_modulus >= g.bound - 1e-9;
    return g;
}

std::size_t cloud_components(std::span<const Complex> points, double eps) {
    if (points.empty()) return 0;
    if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "eps must be positive");
    std::vector<std::size_t> parent(points.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

    // Cells of side eps/2 have diameter below eps, so each cell is connected.
    const double side = 0.5 * eps;
    using Key = std::pair<long long, long long>;
    std::map<Key, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < points.size(); ++i)
        grid[{static_cast<long long>(std::floor(points[i].real() / side)),
              static_cast<long long>(std::floor(points[i].imag() / side))}]
            .push_back(i);
    for (const auto& [key, members] : grid)
        for (std::size_t i : members) unite(i, members.front());

    for (const auto& [key, members] : grid) {
        for (long long dx = -2; dx <= 2; ++dx)
            for (long long dy = -2; dy <= 2; ++dy) {
                const Key other{key.first + dx, key.second + dy};
                if (!(key < other)) continue;
                const auto it = grid.find(other);
                if (it == grid.end() || find(members.front()) == find(it->second.front())) continue;
                bool joined = false;
                for (std::size_t i : members) {
                    for (std::size_t j : it->second)
                        if (std::abs(points[i] - points[j]) < eps) {
                            unite(i, j);
                            joined = true;
                            break;
                        }
                    if (joined) break;
                }
            }
    }
    std::size_t count = 0;
    for (std::size_t i = 0; i < points.size(); ++i) count += find(i) == i;
    return count;
}

}  // namespace dnr
