// Runs the dnr binary as a child process and checks exit codes, stdout JSON
// and the files it writes.

#include "dnr/geometry.hpp"
#include "dnr/io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using dnr::Complex;
using dnr::Json;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               (std::string("dnr_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path matrix(const std::string& name, const dnr::ComplexMatrix& t) { return write(name, dnr::serialize_matrix(t)); }

    Result run(const std::string& args) {
        const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
        const std::string cmd = std::string(DNR_CLI) + " " + args + " > " + out.string() + " 2> " + err.string();
        const int status = std::system(cmd.c_str());
        Result r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    fs::path dir_;
};

const dnr::ComplexMatrix kNilpotent{{0.0, 2.0}, {0.0, 0.0}};

}  // namespace

TEST_F(Cli, RadiusAllMethodsAgreeOnNilpotent) {
    const Result r = run("radius " + matrix("t.json", kNilpotent).string() + " --rho 1.5 --method all");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.err.empty());
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["seed"], 42);
    ASSERT_EQ(j["values"].size(), 3u);
    for (const auto& [name, v] : j["values"].items()) EXPECT_NEAR(v.get<double>(), 4.0 / 3.0, 1e-4) << name;
    EXPECT_LE(j["max_disagreement"].get<double>(), 1e-3);
}

TEST_F(Cli, MethodRhoMismatch) {
    const auto t = matrix("t.json", kNilpotent).string();
    EXPECT_EQ(run("radius " + t + " --rho 3 --method mathias-okubo").code, 6);
    EXPECT_EQ(run("radius " + t + " --rho 3 --method bisection").code, 6);
    const Result all = run("radius " + t + " --rho 3 --method all");
    ASSERT_EQ(all.code, 0);
    const Json j = Json::parse(all.out);
    EXPECT_EQ(j["values"].size(), 1u);
    EXPECT_NEAR(j["values"]["optimize"].get<double>(), 2.0 / 3.0, 1e-6);
}

TEST_F(Cli, RadiusIsByteIdenticalAcrossRunsAndThreadCounts) {
    const auto t = matrix("t.json", oracle::family_matrix(4)).string();
    const Result a = run("radius " + t + " --rho 1.3 --seed 9");
    const Result b = run("radius " + t + " --rho 1.3 --seed 9");
    const Result c = run("radius " + t + " --rho 1.3 --seed 9 --samples 50000");
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(Json::parse(c.out)["seed"], 9);
    setenv("DNR_THREADS", "1", 1);
    const Result single = run("radius " + t + " --rho 1.3 --seed 9");
    unsetenv("DNR_THREADS");
    EXPECT_EQ(single.out, a.out);
}

TEST_F(Cli, MalformedInputs) {
    const Result r = run("radius " + write("bad.json", "{\"n\": 2, \"entries\": [[[1, 0]]").string() + " --rho 1.5");
    EXPECT_EQ(r.code, 2);
    EXPECT_TRUE(r.out.empty());
    EXPECT_FALSE(r.err.empty());
    EXPECT_EQ(run("crho " + (dir_ / "missing.json").string() + " --rho 1").code, 2);
    EXPECT_EQ(run("radius " + matrix("t.json", kNilpotent).string() + " --rho 0.5").code, 2);
    EXPECT_EQ(run("radius " + matrix("t.json", kNilpotent).string() + " --rho 1.5 --method newton").code, 2);
    EXPECT_EQ(run("range " + matrix("t.json", kNilpotent).string()).code, 2);  // --rho missing
    EXPECT_EQ(run("nosuchcommand").code, 2);
    EXPECT_EQ(run("figure --name fig5 --out " + (dir_ / "f").string()).code, 2);
}

TEST_F(Cli, ZeroMatrix) {
    const auto z = matrix("z.json", dnr::ComplexMatrix(3)).string();
    for (const char* cmd : {"radius", "range", "crho", "psi", "compare"}) {
        const Result r = run(std::string(cmd) + " " + z + " --rho 1.5");
        EXPECT_EQ(r.code, 3) << cmd;
        EXPECT_TRUE(r.out.empty()) << cmd;
    }
}

TEST_F(Cli, RangeWritesFilesAndHullIsTheDisc) {
    const auto t = matrix("t.json", kNilpotent).string();
    const fs::path csv = dir_ / "cloud.csv", svg = dir_ / "plot.svg";
    const Result r = run("range " + t + " --rho 1.5 --samples 20000 --out-csv " + csv.string() + " --out-svg " + svg.string());
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["seed"], 42);
    ASSERT_EQ(j["ranges"].size(), 1u);
    EXPECT_NEAR(j["ranges"][0]["nu"].get<double>(), 4.0 / 3.0, 1e-3);

    std::ifstream hull_in(dir_ / "cloud_hull.csv");
    const auto hull = dnr::read_points_csv(hull_in);
    ASSERT_GE(hull.size(), 3u);
    const double dh = dnr::hausdorff_distance(dnr::convex_hull(hull), oracle::disc(4.0 / 3.0));
    EXPECT_LE(dh, 5e-3);
    std::ifstream cloud_in(csv);
    EXPECT_GE(dnr::read_points_csv(cloud_in).size(), j["ranges"][0]["n_feasible"].get<std::size_t>());
    const std::string s = slurp(svg);
    EXPECT_NE(s.find("viewBox=\"0 0 800 800\""), std::string::npos);
    EXPECT_NE(s.find("eigenvalues"), std::string::npos);
}

TEST_F(Cli, RangeSeveralRho) {
    const auto t = matrix("t.json", dnr::ComplexMatrix{{Complex(0, 1), 0.0}, {0.0, 1.0}}).string();
    const fs::path csv = dir_ / "c.csv";
    const Result r = run("range " + t + " --rho 1 1.3333333333333333 2 --samples 5000 --out-csv " + csv.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["ranges"].size(), 3u);
    for (int k = 0; k < 3; ++k) {
        EXPECT_TRUE(fs::exists(dir_ / ("c_" + std::to_string(k) + ".csv")));
        EXPECT_TRUE(fs::exists(dir_ / ("c_" + std::to_string(k) + "_hull.csv")));
    }
}

TEST_F(Cli, BudgetExceededWritesPartialFiles) {
    const auto t = matrix("t.json", oracle::family_matrix(2)).string();
    const fs::path csv = dir_ / "cloud.csv";
    const Result r = run("range " + t + " --rho 1.5 --samples 2000 --budget 10 --out-csv " + csv.string());
    EXPECT_EQ(r.code, 4);
    EXPECT_TRUE(fs::exists(csv));
    EXPECT_TRUE(fs::exists(dir_ / "cloud_hull.csv"));
    EXPECT_TRUE(Json::parse(r.out)["ranges"][0]["budget_exceeded"].get<bool>());
}

TEST_F(Cli, CrhoUnitNilpotentIsIn) {
    const Result r = run("crho " + matrix("t.json", dnr::ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}).string() + " --rho 1");
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["verdict"], "in");
    EXPECT_EQ(j["seed"], 42);
    EXPECT_NEAR(j["radius"].get<double>(), 1.0, 1e-6);
    EXPECT_EQ(j["witness_vector"].size(), 2u);
}

TEST_F(Cli, PsiNilpotentAtTwo) {
    const Result r = run("psi " + matrix("t.json", kNilpotent).string() + " --rho 2 --degree 4 --seed 3");
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_GE(j["ratio"].get<double>(), 2.0 - 1e-3);
    EXPECT_EQ(j["seed"], 3);
    EXPECT_EQ(j["degree"], 4);
    EXPECT_GE(j["boundary_points_used"].get<int>(), 1024);
}

TEST_F(Cli, CompareOnExampleMatrix) {
    const Complex i(0.0, 1.0);
    const dnr::ComplexMatrix t{{-1.0, 0.0, 0.0}, {0.0, 1.0, i}, {0.0, 1.0, 0.0}};
    const Result r = run("compare " + matrix("t.json", t).string() + " --rho 1.62 --q 0.9 --samples 20000");
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_EQ(j["sets"].size(), 4u);
    EXPECT_EQ(j["inclusions"].size(), 12u);
    bool seen_q = false, seen_mo = false;
    for (const auto& inc : j["inclusions"]) {
        if (inc["inner"] != "w_rho") continue;
        if (inc["outer"] == "q_range_scaled") seen_q = true;
        if (inc["outer"] == "mo_range") seen_mo = true;
        if (inc["outer"] == "q_range_scaled" || inc["outer"] == "mo_range")
            EXPECT_GE(inc["margin"].get<double>(), -5e-3) << inc.dump();
    }
    EXPECT_TRUE(seen_q && seen_mo);
}

TEST_F(Cli, FigureFig1IsDeterministic) {
    const fs::path a = dir_ / "a", b = dir_ / "b";
    const Result ra = run("figure --name fig1 --out " + a.string());
    const Result rb = run("figure --name fig1 --out " + b.string());
    ASSERT_EQ(ra.code, 0) << ra.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
        ++n;
    }
    EXPECT_EQ(n, 12u);
}

TEST_F(Cli, FigureFig7ReportsGap) {
    const Result r = run("figure --name fig7 --out " + (dir_ / "f7").string() + " --samples 20000");
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = Json::parse(r.out);
    EXPECT_NEAR(j["gap_bound"].get<double>(), 0.2993, 1e-3);
    EXPECT_GE(j["v_rho_min_modulus"].get<double>(), j["gap_bound"].get<double>() - 1e-6);
    EXPECT_TRUE(fs::exists(dir_ / "f7" / "fig7.svg"));
}

TEST_F(Cli, MatrixFromStdin) {
    const fs::path p = matrix("t.json", kNilpotent);
    const Result r = run("radius - --rho 2 --method optimize < " + p.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(Json::parse(r.out)["values"]["optimize"].get<double>(), 1.0, 1e-6);
}

TEST_F(Cli, HelpExitsZero) {
    const Result r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("radius"), std::string::npos);
}
