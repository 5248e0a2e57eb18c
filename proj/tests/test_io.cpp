#include "dnr/error.hpp"
#include "dnr/figures.hpp"
#include "dnr/io.hpp"
#include "dnr/svg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

using namespace dnr;

namespace {

ErrorKind parse_error_kind(const std::string& text) {
    try {
        parse_matrix(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "accepted: " << text;
    return ErrorKind::ZeroMatrix;
}

std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("dnr_test_io_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST(MatrixFile, ParsesRowMajor) {
    const ComplexMatrix t = parse_matrix(R"({"n": 2, "entries": [[[1, 2], [3, 4]], [[5, 6], [7.5, -8e-3]]]})");
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t(0, 1), Complex(3, 4));
    EXPECT_EQ(t(1, 0), Complex(5, 6));
    EXPECT_EQ(t(1, 1), Complex(7.5, -8e-3));
}

TEST(MatrixFile, RoundTripIsExact) {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> expo(-300.0, 300.0);
    std::normal_distribution<double> g;
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k % 6);
        ComplexMatrix t(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t(i, j) = {g(gen) * std::pow(10.0, expo(gen)), k % 5 == 0 ? 1.0 / 3.0 : g(gen)};
        const std::string text = serialize_matrix(t);
        const ComplexMatrix back = parse_matrix(text);
        EXPECT_EQ(back, t);
        EXPECT_EQ(serialize_matrix(back), text);
    }
}

TEST(MatrixFile, ExtremesSurvive) {
    const double tiny = std::numeric_limits<double>::denorm_min();
    const double big = std::numeric_limits<double>::max();
    const ComplexMatrix t{{Complex(tiny, -big), Complex(-0.0, 0.1)}, {Complex(1e-310, 2.5), 0.30000000000000004}};
    const ComplexMatrix back = parse_matrix(serialize_matrix(t));
    EXPECT_EQ(back, t);
    EXPECT_TRUE(std::signbit(back(0, 1).real()));
}

TEST(MatrixFile, RejectsMalformed) {
    for (const char* bad : {"", "{", "[]", "42", R"({"entries": [[[1, 0]]]})", R"({"n": 1})",
                            R"({"n": 2.5, "entries": []})", R"({"n": 0, "entries": []})",
                            R"({"n": 2, "entries": [[[1, 0], [0, 0]]]})",
                            R"({"n": 2, "entries": [[[1, 0]], [[0, 0], [0, 0]]]})",
                            R"({"n": 1, "entries": [[[1, 0, 0]]]})", R"({"n": 1, "entries": [[["1", 0]]]})",
                            R"({"n": 1, "entries": [[[1e999, 0]]]})", R"({"n": 1, "entries": [[1]]})",
                            R"({"n": 1, "entries": [[[null, 0]]]})", R"({"n": 100, "entries": []})"})
        EXPECT_EQ(parse_error_kind(bad), ErrorKind::InvalidInput) << bad;
}

TEST(MatrixFile, MissingFile) {
    try {
        read_matrix_file("/nonexistent/dir/matrix.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(JsonOutputs, FieldsAndSeed) {
    MembershipCertificate c;
    c.verdict = Verdict::Out;
    c.margin = -0.25;
    c.radius = 1.25;
    c.witness = {Complex(0.6, 0.0), Complex(0.0, -0.8)};
    c.worst_angle = 1.5;
    const Json j = certificate_json(c, RhoParam(1.5), 7);
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["verdict"], "out");
    EXPECT_EQ(j["margin"], -0.25);
    EXPECT_EQ(j["radius"], 1.25);
    EXPECT_EQ(j["worst_angle"], 1.5);
    ASSERT_EQ(j["witness_vector"].size(), 2u);
    EXPECT_EQ(j["witness_vector"][1][1], -0.8);
    EXPECT_TRUE(j["measure_min_eig"].is_null());

    PsiEstimate e;
    e.rho = 2.0;
    e.degree = 3;
    e.ratio = 1.9;
    e.best = Polynomial({0.0, Complex(0.0, 1.0)});
    e.boundary_points_used = 2048;
    const Json p = psi_json(e, 11);
    EXPECT_EQ(p["seed"], 11);
    EXPECT_EQ(p["degree"], 3);
    EXPECT_EQ(p["coefficients"][1][1], 1.0);
    EXPECT_EQ(p["boundary_points_used"], 2048);
}

TEST(JsonOutputs, RangeSummary) {
    SamplerConfig cfg;
    cfg.n_samples = 2000;
    cfg.seed = 5;
    const RangeResult r = deformed_range(ComplexMatrix{{0.0, 2.0}, {0.0, 0.0}}, RhoParam(1.5), cfg);
    const Json j = range_summary(r, 5);
    EXPECT_EQ(j["seed"], 5);
    EXPECT_EQ(j["n_samples"], 2000);
    EXPECT_EQ(j["n_feasible"], r.stats.n_feasible);
    EXPECT_DOUBLE_EQ(j["r"].get<double>(), 2.0 / 3.0);
    EXPECT_EQ(j["hull_vertices"].size(), r.region.size());
    EXPECT_NEAR(j["nu"].get<double>(), 4.0 / 3.0, 1e-6);
}

TEST(Svg, FixedCanvasAndLegend) {
    SvgPlot plot("title & more");
    const std::vector<Complex> pts{0.0, Complex(2.0, 0.5), Complex(-1.0, 1.0)};
    plot.points(pts, Marker::Cross, "red", "rho=4/3 (red crosses)");
    plot.polygon(pts, "blue", "hull");
    plot.circle(0.0, 1.0, "black", "");
    const std::string s = plot.render();
    EXPECT_NE(s.find("viewBox=\"0 0 800 800\""), std::string::npos);
    EXPECT_NE(s.find("rho=4/3 (red crosses)"), std::string::npos);
    EXPECT_NE(s.find("title &amp; more"), std::string::npos);
    EXPECT_EQ(s.find("<style"), std::string::npos);  // inline styles only
    EXPECT_EQ(s.find("href"), std::string::npos);
}

TEST(Svg, EqualAspect) {
    // A circle drawn as points must stay a circle: equal extents in pixels.
    SvgPlot plot;
    std::vector<Complex> ring;
    for (int k = 0; k < 4; ++k) ring.push_back(std::polar(3.0, k * std::numbers::pi / 2));
    ring.push_back(Complex(10.0, 0.0));  // widen the x range only
    plot.points(ring, Marker::Dot, "black", "");
    const std::string s = plot.render();
    std::vector<double> cx, cy;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        double x, y;
        if (std::sscanf(line.c_str(), "<circle cx=\"%lf\" cy=\"%lf\" r=\"1.2\"", &x, &y) == 2) {
            cx.push_back(x);
            cy.push_back(y);
        }
    }
    ASSERT_EQ(cx.size(), 5u);
    // points 0 and 2 are (+-3, 0); 1 and 3 are (0, +-3)
    EXPECT_NEAR(cx[0] - cx[2], cy[3] - cy[1], 0.02);
}

TEST(Svg, Subsamples) {
    SvgPlot plot;
    std::vector<Complex> many(100'000, Complex(1.0, 1.0));
    plot.points(many, Marker::Dot, "black", "", 500);
    const std::string s = plot.render();
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = s.find("r=\"1.2\"", pos)) != std::string::npos; ++pos) ++count;
    EXPECT_LE(count, 500u);
    EXPECT_GE(count, 400u);
}

TEST(Figures, UnknownName) {
    try {
        make_figure("fig3", scratch_dir("unknown"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(Figures, MatricesAreTheHardcodedOnes) {
    const auto m = fig12_matrices();
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m[0], (ComplexMatrix{{Complex(0, 1), 0.0}, {0.0, 1.0}}));
    EXPECT_EQ(m[1], (ComplexMatrix{{Complex(0, 1), 0.0}, {1.0, 1.0}}));
    EXPECT_EQ(m[2], (ComplexMatrix{{-0.1, 1.0}, {0.0, 1.0}}));
    const ComplexMatrix t = fig7_matrix();
    EXPECT_EQ(t(1, 2), Complex(0, 1));
    EXPECT_EQ(t(0, 0), -1.0);
}

TEST(Figures, Fig1SmallRunIsDeterministic) {
    FigureOptions opts;
    opts.n_samples = 3000;
    const auto a = make_figure("fig1", scratch_dir("a"), opts);
    const auto b = make_figure("fig1", scratch_dir("b"), opts);
    ASSERT_EQ(a.files.size(), 12u);  // 3 panels x (3 clouds + 1 svg)
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        std::ifstream fa(a.files[k]), fb(b.files[k]);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        EXPECT_FALSE(sa.str().empty());
        EXPECT_EQ(sa.str(), sb.str()) << a.files[k];
    }
    EXPECT_EQ(a.summary.dump(), b.summary.dump());
}
