#include "dnr/geometry.hpp"

#include "dnr/config.hpp"
#include "dnr/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

namespace dnr {

namespace {

double cross(Complex o, Complex a, Complex b) {
    const Complex u = a - o, v = b - o;
    return u.real() * v.imag() - u.imag() * v.real();
}

double point_segment_distance(Complex z, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(z - a);
    double t = ((z - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

bool lex_less(const Complex& a, const Complex& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// Directions used by support sweeps: uniform grid, the four axes, and the
// outward edge normals of `e`.
std::vector<double> sweep_directions(const ConvexRegion& e, int n_directions) {
    std::vector<double> dirs;
    dirs.reserve(static_cast<std::size_t>(n_directions) + e.size() + 8);
    for (int k = 0; k < n_directions; ++k) dirs.push_back(2.0 * std::numbers::pi * k / n_directions);
    for (int k = 0; k < 4; ++k) dirs.push_back(0.5 * std::numbers::pi * k);
    const auto& v = e.vertices();
    if (v.size() >= 2) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Complex d = v[(i + 1) % v.size()] - v[i];
            if (std::abs(d) == 0.0) continue;
            dirs.push_back(std::atan2(-d.real(), d.imag()));
            if (v.size() == 2) {
                dirs.push_back(std::atan2(d.real(), -d.imag()));
                dirs.push_back(std::arg(d));
                dirs.push_back(std::arg(-d));
            }
        }
    }
    return dirs;
}

}  // namespace

// ---------------------------------------------------------------------------

ConvexRegion convex_hull(std::span<const Complex> input) {
    std::vector<Complex> pts;
    pts.reserve(input.size());
    for (const auto& z : input)
        if (std::isfinite(z.real()) && std::isfinite(z.imag())) pts.push_back(z);
    if (pts.empty()) throw Error(ErrorKind::EmptyCloud, "no finite points");
    std::sort(pts.begin(), pts.end(), lex_less);

    double scale = 0.0, magnitude = 0.0;
    for (const auto& z : pts) {
        scale = std::max(scale, std::abs(z - pts.front()));
        magnitude = std::max(magnitude, std::abs(z));
    }
    // Spread at rounding level around a nonzero point is a single point.
    if (scale <= 1e-13 * magnitude) return ConvexRegion({pts.front()});
    const double tol = kConfig.geom_tol * std::max(scale, 1e-300);

    pts.erase(std::unique(pts.begin(), pts.end(), [&](const Complex& a, const Complex& b) {
                  return std::abs(a - b) <= 1e-3 * tol;
              }),
              pts.end());
    if (pts.size() == 1 || scale <= 1e-3 * tol) return ConvexRegion({pts.front()});

    // Pop the middle point when it lies within `tol` of the chord (or turns clockwise).
    auto turn_too_small = [&](Complex o, Complex a, Complex b) {
        const double len = std::abs(b - o);
        return cross(o, a, b) <= tol * std::max(len, 1e-300);
    };

    std::vector<Complex> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && turn_too_small(hull[k - 2], hull[k - 1], p)) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && turn_too_small(hull[k - 2], hull[k - 1], pts[i])) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() <= 2) {
        // Collinear input: keep the two extreme points.
        return ConvexRegion({pts.front(), pts.back()});
    }
    return ConvexRegion(std::move(hull));
}

ConvexRegion convex_hull(const PointCloud& cloud) { return convex_hull(std::span<const Complex>(cloud.points)); }

double ConvexRegion::area() const {
    if (vertices_.size() < 3) return 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        const Complex p = vertices_[i], q = vertices_[(i + 1) % vertices_.size()];
        a += p.real() * q.imag() - q.real() * p.imag();
    }
    return 0.5 * a;
}

double ConvexRegion::max_modulus() const {
    double m = 0.0;
    for (const auto& v : vertices_) m = std::max(m, std::abs(v));
    return m;
}

Complex ConvexRegion::centroid() const {
    Complex c{};
    for (const auto& v : vertices_) c += v;
    return vertices_.empty() ? c : c / static_cast<double>(vertices_.size());
}

ConvexRegion ConvexRegion::scaled(Complex alpha) const {
    std::vector<Complex> v = vertices_;
    for (auto& z : v) z *= alpha;
    return convex_hull(v);
}

ConvexRegion ConvexRegion::translated(Complex shift) const {
    ConvexRegion r = *this;
    for (auto& z : r.vertices_) z += shift;
    return r;
}

ConvexRegion ConvexRegion::disc(Complex center, double radius, int n) {
    std::vector<Complex> v;
    v.reserve(n);
    for (int k = 0; k < n; ++k) v.push_back(center + std::polar(radius, 2.0 * std::numbers::pi * k / n));
    return convex_hull(v);
}

double support(std::span<const Complex> points, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& v : points) h = std::max(h, v.real() * c + v.imag() * s);
    return h;
}

double support(const ConvexRegion& e, double theta) {
    if (e.empty()) throw Error(ErrorKind::EmptyRegion, "support of empty region");
    return support(std::span<const Complex>(e.vertices()), theta);
}

double distance(const ConvexRegion& e, Complex z) {
    const auto& v = e.vertices();
    if (v.empty()) throw Error(ErrorKind::EmptyRegion, "distance to empty region");
    if (v.size() == 1) return std::abs(z - v[0]);
    if (v.size() == 2) return point_segment_distance(z, v[0], v[1]);
    bool inside = true;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (cross(v[i], v[(i + 1) % v.size()], z) < 0.0) {
            inside = false;
            break;
        }
    if (inside) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, point_segment_distance(z, v[i], v[(i + 1) % v.size()]));
    return d;
}

double signed_depth(const ConvexRegion& e, Complex z) {
    const double d = distance(e, z);
    if (d > 0.0 || e.is_degenerate()) return -d;
    const auto& v = e.vertices();
    double depth = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i], b = v[(i + 1) % v.size()];
        depth = std::min(depth, cross(a, b, z) / std::abs(b - a));
    }
    return depth;
}

double hausdorff_distance(const ConvexRegion& e, const ConvexRegion& f, int n_directions) {
    if (e.empty() || f.empty()) throw Error(ErrorKind::EmptyRegion, "Hausdorff distance of empty region");
    double exact = 0.0;
    for (const auto& v : e.vertices()) exact = std::max(exact, distance(f, v));
    for (const auto& w : f.vertices()) exact = std::max(exact, distance(e, w));
    double sweep = 0.0;
    for (int k = 0; k < n_directions; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n_directions;
        sweep = std::max(sweep, std::abs(support(e, th) - support(f, th)));
    }
    return std::max(exact, sweep);
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
    auto directed = [](std::span<const Complex> x, std::span<const Complex> y) {
        double worst = 0.0;
        for (const auto& p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : y) best = std::min(best, std::abs(p - q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

Containment contains(const ConvexRegion& e, const ConvexRegion& f, double tol, int n_directions) {
    if (e.empty() || f.empty()) throw Error(ErrorKind::EmptyRegion, "containment with empty region");
    Containment c;
    c.margin = std::numeric_limits<double>::infinity();
    for (double th : sweep_directions(e, n_directions)) {
        const double m = support(e, th) - support(f, th);
        if (m < c.margin) {
            c.margin = m;
            c.worst_direction = th;
        }
    }
    c.holds = c.margin >= -tol;
    return c;
}

Containment contains(const ConvexRegion& e, Complex z, double tol, int n_directions) {
    const std::vector<Complex> one{z};
    return contains(e, convex_hull(one), tol, n_directions);
}

ConvexRegion minkowski_sum(const ConvexRegion& a, const ConvexRegion& b) {
    std::vector<Complex> sums;
    sums.reserve(a.size() * b.size());
    for (const auto& p : a.vertices())
        for (const auto& q : b.vertices()) sums.push_back(p + q);
    return convex_hull(sums);
}

std::vector<Complex> boundary_points(const ConvexRegion& e, std::size_t n_points) {
    const auto& v = e.vertices();
    if (v.empty()) throw Error(ErrorKind::EmptyRegion, "boundary of empty region");
    if (v.size() == 1) return v;
    double perimeter = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) perimeter += std::abs(v[(i + 1) % v.size()] - v[i]);
    std::vector<Complex> out;
    out.reserve(n_points + v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex a = v[i], b = v[(i + 1) % v.size()];
        const double share = perimeter > 0.0 ? std::abs(b - a) / perimeter : 0.0;
        const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(share * n_points)));
        for (std::size_t j = 0; j < pieces; ++j) out.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

void write_points_csv(std::ostream& os, std::span<const Complex> points) {
    for (const auto& z : points) os << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

std::vector<Complex> read_points_csv(std::istream& is) {
    std::vector<Complex> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorKind::InvalidInput, "CSV line without comma: " + line);
        double re = 0.0, im = 0.0;
        const char* first = line.data();
        auto r1 = std::from_chars(first, first + comma, re);
        auto r2 = std::from_chars(first + comma + 1, first + line.size(), im);
        if (r1.ec != std::errc{} || r2.ec != std::errc{})
            throw Error(ErrorKind::InvalidInput, "malformed CSV number: " + line);
        out.emplace_back(re, im);
    }
    return out;
}

}  // namespace dnr
