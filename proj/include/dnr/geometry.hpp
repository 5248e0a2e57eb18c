#pragma once

#include "dnr/linalg.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dnr {

/// Sampled points of a range, optionally with the unit vectors that produced them.
struct PointCloud {
    std::vector<Complex> points;
    std::vector<ComplexVector> witnesses;  // empty, or one per point

    std::size_t size() const noexcept { return points.size(); }
    bool has_witnesses() const noexcept { return !witnesses.empty() && witnesses.size() == points.size(); }
    void add(Complex z) { points.push_back(z); }
};

/// Closed convex planar set stored as its hull polygon (counterclockwise).
/// A single vertex is a point, two vertices a segment.
class ConvexRegion {
public:
    ConvexRegion() = default;

    const std::vector<Complex>& vertices() const noexcept { return vertices_; }
    bool empty() const noexcept { return vertices_.empty(); }
    bool is_degenerate() const noexcept { return vertices_.size() <= 2; }
    std::size_t size() const noexcept { return vertices_.size(); }

    double area() const;
    double max_modulus() const;
    Complex centroid() const;

    ConvexRegion scaled(Complex alpha) const;
    ConvexRegion translated(Complex shift) const;

    /// Polygon with `n` vertices on the circle |z - center| = radius.
    static ConvexRegion disc(Complex center, double radius, int n = 720);

private:
    friend ConvexRegion convex_hull(std::span<const Complex> points);
    explicit ConvexRegion(std::vector<Complex> v) : vertices_(std::move(v)) {}
    std::vector<Complex> vertices_;
};

/// Monotone-chain hull; near-collinear vertices (within geom_tol) are dropped.
ConvexRegion convex_hull(std::span<const Complex> points);
ConvexRegion convex_hull(const PointCloud& cloud);

/// h_E(theta) = max over vertices of Re(exp(-i theta) v).
double support(const ConvexRegion& e, double theta);
double support(std::span<const Complex> points, double theta);

/// Exact Hausdorff distance between polygons (vertex-to-region distances),
/// combined with a support-function sweep; the larger of the two is returned.
double hausdorff_distance(const ConvexRegion& e, const ConvexRegion& f, int n_directions = 720);

/// Discrete Hausdorff distance between two finite point sets.
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

/// Euclidean distance from z to the region (0 inside).
double distance(const ConvexRegion& e, Complex z);

/// Positive depth inside, minus the distance outside. Zero on the boundary.
/// Degenerate regions have no interior, so the depth never exceeds zero.
double signed_depth(const ConvexRegion& e, Complex z);

struct Containment {
    bool holds = false;
    double margin = 0.0;         // min over directions of h_E - h_F (negative = violation)
    double worst_direction = 0.0;
};

/// F inside E up to `tol`, tested over `n_directions` uniform directions plus
/// every edge normal of E (which makes the polygon case exact).
Containment contains(const ConvexRegion& e, const ConvexRegion& f, double tol, int n_directions = 720);
Containment contains(const ConvexRegion& e, Complex z, double tol, int n_directions = 720);

ConvexRegion minkowski_sum(const ConvexRegion& a, const ConvexRegion& b);

/// Boundary points: every vertex plus uniform subdivision of the edges,
/// `n_points` in total (at least the vertex count).
std::vector<Complex> boundary_points(const ConvexRegion& e, std::size_t n_points);

/// CSV: one "re,im" line per point, shortest round-trip formatting.
void write_points_csv(std::ostream& os, std::span<const Complex> points);
std::vector<Complex> read_points_csv(std::istream& is);

/// Shortest representation of x that parses back to the same double.
std::string format_double(double x);

}  // namespace dnr
