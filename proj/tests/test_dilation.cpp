#include "dnr/companion.hpp"
#include "dnr/deformed_range.hpp"
#include "dnr/dilation.hpp"
#include "dnr/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dnr;

namespace {

ComplexMatrix nilpotent(double c) { return {{0.0, c}, {0.0, 0.0}}; }

double inv_two_pi() { return 0.5 / std::numbers::pi; }

}  // namespace

TEST(Phi, ConstantTermIsOne) {
    std::mt19937_64 gen(1);
    const ComplexMatrix t = oracle::gaussian_matrix(3, 2);
    for (double rho : {1.0, 1.5, 2.0, 3.0}) EXPECT_EQ(phi(t, oracle::unit_vector(3, gen), RhoParam(rho), 0.0), 1.0);
}

TEST(Phi, RhoOneClosedForm) {
    std::mt19937_64 gen(3);
    const ComplexMatrix t = oracle::gaussian_matrix(3, 4);
    for (int k = 0; k < 20; ++k) {
        const auto h = oracle::unit_vector(3, gen);
        const auto th = oracle::apply(t, h);
        double n2 = 0.0;
        for (Complex v : th) n2 += std::norm(v);
        for (double s : {0.0, 0.3, 0.7, 1.0}) EXPECT_NEAR(phi(t, h, RhoParam(1.0), s), 1.0 - n2 * s * s, 1e-12 * (1 + n2));
        // nonnegative on [0, 1] iff ||Th|| <= 1
        const QuadraticPhi q = quadratic_phi(t, h, RhoParam(1.0));
        EXPECT_EQ(q(1.0) >= 0.0, n2 <= 1.0);
    }
}

TEST(Phi, EigenvectorAtRhoTwoIsLinear) {
    const Complex lambda{0.6, -0.3};
    const ComplexMatrix t{{lambda, 1.0}, {0.0, -2.0}};
    const ComplexVector v{1.0, 0.0};
    for (double s : {0.0, 0.5, 1.0}) EXPECT_NEAR(phi(t, v, RhoParam(2.0), s), 1.0 - std::abs(lambda) * s, 1e-14);
}

TEST(Phi, RejectsNonUnit) {
    try {
        phi(nilpotent(2.0), ComplexVector{1.0, 1.0}, RhoParam(1.5), 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotUnit);
    }
}

TEST(Phi, SmallerRootIsReciprocalOfPointModulus) {
    std::mt19937_64 gen(5);
    int checked = 0;
    for (int m = 0; m < 6; ++m) {
        const ComplexMatrix t = oracle::family_matrix(m);
        for (double rho : {1.0, 1.3, 1.7, 2.0, 2.5, 6.0}) {
            for (int k = 0; k < 100; ++k) {
                const auto h = oracle::unit_vector(t.size(), gen);
                const auto p = oracle::range_point(t, h, rho);
                if (!p || std::abs(*p) == 0.0) continue;
                const DomainSample s = evaluate(t, h, RhoParam(rho));
                if (!(s.delta > 0.0)) continue;
                const auto roots = quadratic_phi(t, h, RhoParam(rho)).roots();
                ASSERT_TRUE(roots.has_value());
                const double expected = 1.0 / std::abs(*p);
                EXPECT_NEAR(std::abs(roots->first), expected, 1e-9 * std::max(1.0, expected));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 2000);
}

TEST(Phi, LinearCaseRoot) {
    const QuadraticPhi q{1.0, -0.5, 0.0};
    const auto roots = q.roots();
    ASSERT_TRUE(roots.has_value());
    EXPECT_DOUBLE_EQ(roots->first, 2.0);
    EXPECT_TRUE(std::isinf(roots->second));
}

TEST(MeasureDensity, ScalarResolvent) {
    const ComplexMatrix t = Complex(0.5) * ComplexMatrix::identity(2);
    for (double s : {0.0, 1.0, 2.5, 4.0}) {
        const MeasureSample m = measure_density(t, 1.0, s, 0.0);
        const double expected = inv_two_pi() * 0.75 / std::norm(std::polar(1.0, s) - 0.5);
        EXPECT_NEAR(m.density(0, 0).real(), expected, 1e-14);
        EXPECT_NEAR(m.density(1, 1).real(), expected, 1e-14);
        EXPECT_NEAR(std::abs(m.density(0, 1)), 0.0, 1e-15);
        EXPECT_GT(m.min_eig, 0.0);
    }
}

TEST(MeasureDensity, ScalarDensityOneClosedForm) {
    // (1/2pi) 2 Re(xi / (xi - c))
    const Complex c{0.2, -0.3};
    const ComplexMatrix t = c * ComplexMatrix::identity(1);
    for (double s : {0.3, 1.9}) {
        const Complex x = std::polar(1.5, s);
        const MeasureSample m = measure_density(t, 1.5, s, 1.0);
        EXPECT_NEAR(m.density(0, 0).real(), inv_two_pi() * 2.0 * (x / (x - c)).real(), 1e-14);
    }
}

TEST(MeasureDensity, HermitianAndLinearInMix) {
    for (int m = 0; m < 5; ++m) {
        const ComplexMatrix t = oracle::family_matrix(m);
        const double radius = 1.2 * operator_norm(t);
        for (double s : {0.1, 1.3, 3.0, 5.5}) {
            for (double mix : {0.0, 0.25, 0.9, 1.0}) {
                const MeasureSample ms = measure_density(t, radius, s, mix);
                EXPECT_LE((ms.density - ms.density.adjoint()).max_abs(), 1e-10 * ms.density.max_abs());
                const ComplexMatrix again = mix * ms.density1 + (1.0 - mix) * ms.density0;
                EXPECT_EQ(again, ms.density);
            }
        }
    }
}

TEST(MeasureDensity, SingularOnSpectrum) {
    const std::vector<Complex> d{0.5, 2.0};
    try {
        measure_density(ComplexMatrix::diagonal(d), 0.5, 0.0, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularResolvent);
    }
    EXPECT_THROW(measure_density(ComplexMatrix::diagonal(d), 1.0, 0.0, 1.5), Error);
}

TEST(MeasurePositivity, NilpotentJustAboveRadius) {
    const double rho = 1.5;
    const auto s = measure_positivity(nilpotent(2.0), 2.0 / rho * (1 + 1e-3), rho - 1.0);
    EXPECT_GE(s.min_eig, -1e-8);
    const auto below = measure_positivity(nilpotent(2.0), 2.0 / rho * 0.95, rho - 1.0);
    EXPECT_LT(below.min_eig, -1e-6);
}

TEST(MeasurePositivity, ThresholdOnRandomMatrices) {
    for (int m = 0; m < 4; ++m) {
        const ComplexMatrix t = oracle::family_matrix(m);
        for (double rho : {1.1, 1.5, 1.9}) {
            const double nu = mo_radius(t, RhoParam(rho));
            EXPECT_GE(measure_positivity(t, nu * (1 + 1e-3), rho - 1.0).min_eig, -1e-8) << m << " " << rho;
            EXPECT_LT(measure_positivity(t, nu * 0.95, rho - 1.0).min_eig, -1e-6) << m << " " << rho;
        }
    }
}

TEST(Bisection, NilpotentClosedForm) {
    const auto b = nu_by_measure_bisection(nilpotent(2.0), RhoParam(1.5));
    EXPECT_TRUE(b.independent);
    EXPECT_NEAR(b.value, 4.0 / 3.0, 1e-4);
}

TEST(Bisection, RhoOneIsNorm) {
    for (int m = 0; m < 3; ++m) {
        const ComplexMatrix t = oracle::family_matrix(m);
        const auto g = hermitian_eigs(t.adjoint() * t);
        EXPECT_NEAR(nu_by_measure_bisection(t, RhoParam(1.0)).value, std::sqrt(g.values.back()), 1e-4);
    }
}

TEST(Bisection, RhoTwoNormalIsSpectralRadius) {
    const std::vector<Complex> d{Complex(0.3, 0.9), -0.7, Complex(0.0, -0.2)};
    const ComplexMatrix u = oracle::unitary(3, 17);
    const ComplexMatrix t = u * ComplexMatrix::diagonal(d) * u.adjoint();
    EXPECT_NEAR(nu_by_measure_bisection(t, RhoParam(2.0)).value, std::abs(d[0]), 1e-4);
}

TEST(Bisection, AgreesWithDirectSearch) {
    for (int m = 0; m < 3; ++m) {
        const ComplexMatrix t = oracle::family_matrix(m);
        for (double rho : {1.25, 1.75}) {
            const double direct = nu_direct(t, RhoParam(rho)).value;
            EXPECT_NEAR(nu_by_measure_bisection(t, RhoParam(rho), 1e-7).value, direct, 1e-6);
        }
    }
}

TEST(Bisection, AboveTwoFallsBack) {
    const auto b = nu_by_measure_bisection(nilpotent(2.0), RhoParam(3.0));
    EXPECT_FALSE(b.independent);
    EXPECT_NEAR(b.value, 2.0 / 3.0, 1e-6);
}

TEST(Bisection, ZeroMatrixRejected) { EXPECT_THROW(nu_by_measure_bisection(ComplexMatrix(2), RhoParam(1.5)), Error); }

TEST(Membership, ScaledNilpotentIsBoundaryIn) {
    for (double rho : {1.0, 1.5, 2.0, 3.0}) {
        const auto c = c_rho_membership(nilpotent(rho), RhoParam(rho));
        EXPECT_EQ(c.verdict, Verdict::In) << rho;
        EXPECT_TRUE(c.boundary) << rho;
    }
}

TEST(Membership, SmallNormIsIn) {
    ComplexMatrix t = oracle::family_matrix(1);
    t *= 0.5 / operator_norm(t);
    const auto c = c_rho_membership(t, RhoParam(1.0));
    EXPECT_EQ(c.verdict, Verdict::In);
    EXPECT_NEAR(c.margin, 0.5, 1e-6);
    ASSERT_TRUE(c.measure_min_eig.has_value());
    EXPECT_GT(*c.measure_min_eig, 0.0);
}

TEST(Membership, NilpotentAtOnePointFiveIsOut) {
    const auto c = c_rho_membership(nilpotent(2.0), RhoParam(1.5));
    EXPECT_EQ(c.verdict, Verdict::Out);
    EXPECT_NEAR(c.radius, 4.0 / 3.0, 1e-6);
    const auto p = oracle::range_point(nilpotent(2.0), c.witness, 1.5);
    ASSERT_TRUE(p.has_value());
    EXPECT_GT(std::abs(*p), 1.0 + 1e-6);
}

TEST(Membership, UnitNilpotentAtRhoOne) {
    const auto c = c_rho_membership(nilpotent(1.0), RhoParam(1.0));
    EXPECT_EQ(c.verdict, Verdict::In);
    EXPECT_TRUE(c.boundary);
}

TEST(Membership, VerdictNames) {
    EXPECT_STREQ(to_string(Verdict::In), "in");
    EXPECT_STREQ(to_string(Verdict::Out), "out");
    EXPECT_STREQ(to_string(Verdict::Inconclusive), "inconclusive");
}
