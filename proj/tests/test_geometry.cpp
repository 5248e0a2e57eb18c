#include "dnr/config.hpp"
#include "dnr/error.hpp"
#include "dnr/geometry.hpp"
#include "dnr/random.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace dnr;

namespace {

const Complex I1{0.0, 1.0};

ConvexRegion hull_of(std::initializer_list<Complex> pts) {
    const std::vector<Complex> v(pts);
    return convex_hull(v);
}

std::vector<Complex> random_cloud(std::uint64_t seed, std::size_t n, double spread) {
    CounterRng rng(seed, 0);
    std::vector<Complex> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(spread * rng.complex_normal());
    return v;
}

// Barycentric coordinates of z in triangle (a, b, c); inside iff all >= 0.
bool in_triangle(Complex a, Complex b, Complex c, Complex z) {
    auto cr = [](Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double det = cr(b - a, c - a);
    const double l1 = cr(z - a, c - a) / det;
    const double l2 = cr(b - a, z - a) / det;
    return l1 >= 0 && l2 >= 0 && l1 + l2 <= 1;
}

}  // namespace

TEST(ConvexHull, InteriorPointDiscarded) {
    const auto h = hull_of({0.0, 1.0, I1, {0.2, 0.2}});
    ASSERT_EQ(h.size(), 3u);
    const auto& v = h.vertices();
    EXPECT_NE(std::find(v.begin(), v.end(), Complex(0.0)), v.end());
    EXPECT_NE(std::find(v.begin(), v.end(), Complex(1.0)), v.end());
    EXPECT_NE(std::find(v.begin(), v.end(), I1), v.end());
    EXPECT_GT(h.area(), 0.0);  // counterclockwise
}

TEST(ConvexHull, CollinearBecomesSegment) {
    const auto h = hull_of({0.0, 1.0, 2.0});
    EXPECT_TRUE(h.is_degenerate());
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h.vertices()[0], Complex(0.0));
    EXPECT_EQ(h.vertices()[1], Complex(2.0));
}

TEST(ConvexHull, SinglePoint) {
    const auto h = hull_of({{1.0, 1.0}, {1.0, 1.0}});
    EXPECT_EQ(h.size(), 1u);
}

TEST(ConvexHull, EmptyThrows) {
    const std::vector<Complex> none;
    try {
        convex_hull(none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyCloud);
    }
}

TEST(ConvexHull, CircleSamplesApproachDiscArea) {
    std::vector<Complex> v;
    CounterRng rng(42, 0);
    for (int i = 0; i < 10000; ++i) v.push_back(std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform()));
    EXPECT_NEAR(convex_hull(v).area(), std::numbers::pi, 1e-2);
}

TEST(ConvexHull, IdempotentAndOrderInvariant) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto pts = random_cloud(seed, 80, 1.0);
        const auto h = convex_hull(pts);
        const auto hh = convex_hull(h.vertices());
        EXPECT_EQ(h.vertices(), hh.vertices());
        std::reverse(pts.begin(), pts.end());
        std::rotate(pts.begin(), pts.begin() + 17, pts.end());
        EXPECT_EQ(convex_hull(pts).vertices(), h.vertices());
    }
}

TEST(ConvexHull, NoThreeConsecutiveCollinear) {
    std::vector<Complex> pts;
    for (int i = 0; i <= 10; ++i) {
        pts.emplace_back(i * 0.1, 0.0);
        pts.emplace_back(i * 0.1, 1.0);
        pts.emplace_back(0.0, i * 0.1);
        pts.emplace_back(1.0, i * 0.1);
    }
    EXPECT_EQ(convex_hull(pts).size(), 4u);
}

TEST(Support, Examples) {
    const auto disc = ConvexRegion::disc(0.0, 1.0, 360);
    for (double th : {0.0, 0.3, 1.0, 2.5, 4.0}) EXPECT_NEAR(support(disc, th), 1.0, 1e-3);
    const auto seg = hull_of({0.0, 2.0});
    EXPECT_DOUBLE_EQ(support(seg, 0.0), 2.0);
    EXPECT_NEAR(support(seg, std::numbers::pi / 2), 0.0, 1e-15);
}

TEST(Support, AdditiveOverMinkowskiSum) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = convex_hull(random_cloud(seed, 30, 1.0));
        const auto b = convex_hull(random_cloud(seed + 50, 30, 2.0));
        const auto s = minkowski_sum(a, b);
        for (int k = 0; k < 64; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 64;
            EXPECT_NEAR(support(s, th), support(a, th) + support(b, th), 1e-9);
        }
    }
}

TEST(Hausdorff, Examples) {
    const auto disc = ConvexRegion::disc(0.0, 1.0);
    const auto origin = hull_of({0.0});
    EXPECT_NEAR(hausdorff_distance(origin, disc), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(hausdorff_distance(disc, disc), 0.0);

    const auto square = hull_of({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const double d = hausdorff_distance(square, disc);
    EXPECT_NEAR(d, std::sqrt(2.0) - 1.0, 1e-6);
    // Dense direction sweep oracle.
    double sweep = 0.0;
    for (int k = 0; k < 100000; ++k) {
        const double th = 2.0 * std::numbers::pi * k / 100000;
        sweep = std::max(sweep, std::abs(support(square, th) - 1.0));
    }
    EXPECT_NEAR(d, sweep, 1e-6);
}

TEST(Hausdorff, Symmetric) {
    const auto a = convex_hull(random_cloud(1, 40, 1.0));
    const auto b = convex_hull(random_cloud(2, 40, 1.5));
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), hausdorff_distance(b, a));
}

TEST(Hausdorff, SkinnySegmentVersusPoint) {
    // The sweep alone is exact here too, but the vertex distances must agree.
    const auto seg = hull_of({-1.0, 1.0});
    const auto pt = hull_of({{0.0, 0.5}});
    EXPECT_NEAR(hausdorff_distance(seg, pt), std::hypot(1.0, 0.5), 1e-12);
}

TEST(Hausdorff, HullIsLipschitzInCloud) {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const std::size_t n1 = 3 + seed % 97, n2 = 3 + (seed * 7) % 97;
        const auto v1 = random_cloud(seed, n1, 1.0);
        const auto v2 = random_cloud(seed + 1000, n2, 1.0 + 0.01 * seed);
        const double dh_sets = hausdorff_distance(std::span<const Complex>(v1), std::span<const Complex>(v2));
        const double dh_hulls = hausdorff_distance(convex_hull(v1), convex_hull(v2));
        EXPECT_LE(dh_hulls, dh_sets + kConfig.geom_tol);
    }
}

TEST(Contains, NestedDiscs) {
    const auto big = ConvexRegion::disc(0.0, 1.0);
    const auto small = ConvexRegion::disc(0.0, 0.5);
    EXPECT_TRUE(contains(big, small, 0.0).holds);
    const auto c = contains(small, big, 0.0);
    EXPECT_FALSE(c.holds);
    EXPECT_NEAR(c.margin, -0.5, 1e-12);
}

TEST(Contains, PointInTriangle) {
    const auto tri = hull_of({0.0, 1.0, I1});
    const Complex z{0.3, 0.3};
    ASSERT_TRUE(in_triangle(0.0, 1.0, I1, z));
    EXPECT_TRUE(contains(tri, z, 0.0).holds);
    EXPECT_FALSE(contains(tri, Complex{0.6, 0.6}, 1e-6).holds);
    EXPECT_FALSE(in_triangle(0.0, 1.0, I1, {0.6, 0.6}));
}

TEST(Contains, AgreesWithBarycentricOracle) {
    const Complex a{0.0, 0.0}, b{2.0, 0.3}, c{0.4, 1.7};
    const auto tri = hull_of({a, b, c});
    CounterRng rng(5, 0);
    for (int i = 0; i < 2000; ++i) {
        const Complex z{2.4 * rng.uniform() - 0.2, 2.0 * rng.uniform() - 0.2};
        if (std::abs(distance(tri, z)) < 1e-9) continue;
        EXPECT_EQ(contains(tri, z, 0.0).holds, in_triangle(a, b, c, z)) << z;
    }
}

TEST(Contains, TransitiveAtSummedTolerance) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto e = convex_hull(random_cloud(seed, 50, 2.0));
        const auto f = e.scaled(0.7).translated(Complex(0.01, -0.01));
        const auto g = f.scaled(0.9);
        const double tol = 0.02;
        const auto ef = contains(e, f, tol), fg = contains(f, g, tol);
        if (ef.holds && fg.holds) EXPECT_TRUE(contains(e, g, 2 * tol).holds);
    }
}

TEST(Contains, SegmentRejectsOffAxisPoint) {
    const auto seg = hull_of({-1.0, 1.0});
    EXPECT_TRUE(contains(seg, Complex(0.5), 1e-12).holds);
    EXPECT_FALSE(contains(seg, Complex(0.5, 1e-3), 1e-6).holds);
    EXPECT_FALSE(contains(seg, Complex(1.1), 1e-6).holds);
}

TEST(SignedDepth, InsideOutside) {
    const auto square = hull_of({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    EXPECT_NEAR(signed_depth(square, 0.0), 1.0, 1e-12);
    EXPECT_NEAR(signed_depth(square, Complex(3.0, 0.0)), -2.0, 1e-12);
    EXPECT_NEAR(signed_depth(hull_of({-1.0, 1.0}), 0.0), 0.0, 1e-15);
}

TEST(BoundaryPoints, CountAndLocation) {
    const auto square = hull_of({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const auto pts = boundary_points(square, 1024);
    EXPECT_GE(pts.size(), 1024u);
    for (const auto& z : pts) EXPECT_NEAR(std::max(std::abs(z.real()), std::abs(z.imag())), 1.0, 1e-12);
}

TEST(Csv, RoundTrip) {
    const auto pts = random_cloud(9, 100, 3.0);
    std::stringstream ss;
    write_points_csv(ss, pts);
    EXPECT_EQ(read_points_csv(ss), pts);
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST(ConvexHull, RoundingSpreadCollapsesToPoint) {
    const std::vector<Complex> pts{1.0 - 4e-16, 1.0, Complex(1.0 + 4e-16, 1e-17)};
    EXPECT_EQ(convex_hull(pts).size(), 1u);
    const std::vector<Complex> tiny{0.0, 1e-20};
    EXPECT_EQ(convex_hull(tiny).size(), 2u);
}
