#include "dnr/companion.hpp"
#include "dnr/deformed_range.hpp"
#include "dnr/dilation.hpp"
#include "dnr/error.hpp"
#include "dnr/figures.hpp"
#include "dnr/io.hpp"
#include "dnr/spectral_constants.hpp"
#include "dnr/svg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>

namespace fs = std::filesystem;
using namespace dnr;

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kUnexpected = 1;
constexpr int kInvalid = 2;
constexpr int kZeroMatrix = 3;
constexpr int kBudget = 4;
constexpr int kDisagreement = 5;
constexpr int kMethodMismatch = 6;

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::ZeroMatrix: return kZeroMatrix;
        case ErrorKind::BudgetExceeded:
        case ErrorKind::ConvergenceFailure:
        case ErrorKind::BracketFailure:
        case ErrorKind::Inconclusive: return kBudget;
        default: return kInvalid;
    }
}

struct Common {
    std::string matrix;
    std::uint64_t seed = 42;
    std::size_t samples = 0;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("matrix,--matrix", c.matrix, "matrix JSON file ('-' reads stdin)")->required();
    cmd->add_option("--seed", c.seed, "random seed")->capture_default_str();
    cmd->add_option("--samples", c.samples, "sampled unit vectors (default depends on the dimension)")
        ->check(CLI::PositiveNumber);
}

ComplexMatrix load(const Common& c) {
    ComplexMatrix t;
    if (c.matrix == "-") {
        const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
        t = parse_matrix(text);
    } else {
        t = read_matrix_file(c.matrix);
    }
    if (t.is_zero()) throw Error(ErrorKind::ZeroMatrix, "T = 0");
    return t;
}

SamplerConfig sampler(const Common& c) {
    SamplerConfig cfg;
    cfg.seed = c.seed;
    cfg.n_samples = c.samples;
    return cfg;
}

void emit(const Json& j) { std::cout << j.dump() << '\n'; }

// "out.csv" -> "out<suffix>.csv"
fs::path with_suffix(const fs::path& p, const std::string& suffix) {
    return p.parent_path() / (p.stem().string() + suffix + p.extension().string());
}

void write_csv(const fs::path& path, std::span<const Complex> z) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
    write_points_csv(out, z);
}

struct RangeArgs {
    Common common;
    std::vector<double> rho;
    std::string out_csv, out_hull, out_svg;
    std::size_t budget = 0;
};

int cmd_range(const RangeArgs& a) {
    const ComplexMatrix t = load(a.common);
    std::vector<RhoParam> rhos;
    for (double r : a.rho) rhos.emplace_back(r);
    SamplerConfig cfg = sampler(a.common);
    if (a.budget) cfg.max_total_evaluations = a.budget;

    static constexpr std::array<const char*, 6> kColors{"blue", "red", "black", "orange", "green", "purple"};
    static constexpr std::array<Marker, 3> kMarkers{Marker::Circle, Marker::Cross, Marker::Dot};
    SvgPlot plot(rhos.size() == 1 ? "rho = " + format_double(rhos[0].rho()) : "");
    Json out;
    out["seed"] = a.common.seed;
    out["ranges"] = Json::array();
    bool over_budget = false;
    for (std::size_t k = 0; k < rhos.size(); ++k) {
        const RangeResult r = deformed_range(t, rhos[k], cfg);
        over_budget = over_budget || r.budget_exceeded;
        const std::string tag = rhos.size() > 1 ? "_" + std::to_string(k) : "";
        if (!a.out_csv.empty()) {
            write_csv(with_suffix(a.out_csv, tag), r.cloud.points);
            const fs::path hull = a.out_hull.empty() ? with_suffix(a.out_csv, tag + "_hull") : with_suffix(a.out_hull, tag);
            write_csv(hull, r.region.vertices());
        } else if (!a.out_hull.empty()) {
            write_csv(with_suffix(a.out_hull, tag), r.region.vertices());
        }
        const std::string label = "rho=" + format_double(rhos[k].rho());
        plot.points(r.cloud.points, kMarkers[k % kMarkers.size()], kColors[k % kColors.size()], label);
        plot.polygon(r.region.vertices(), kColors[k % kColors.size()], "");
        out["ranges"].push_back(range_summary(r, a.common.seed));
    }
    if (!a.out_svg.empty()) {
        plot.points(spectrum(t).eigenvalues, Marker::Star, "gold", "eigenvalues");
        plot.origin_cross();
        plot.save(a.out_svg);
    }
    emit(out);
    if (over_budget) {
        std::cerr << "evaluation budget exceeded; partial results written\n";
        return kBudget;
    }
    return kOk;
}

struct RadiusArgs {
    Common common;
    double rho = 1.0;
    std::string method = "all";
};

int cmd_radius(const RadiusArgs& a) {
    const RhoParam rho(a.rho);
    if ((a.method == "mathias-okubo" || a.method == "bisection") && !rho.at_most_two()) {
        std::cerr << "method '" << a.method << "' requires rho in [1, 2]\n";
        return kMethodMismatch;
    }
    const ComplexMatrix t = load(a.common);
    const SamplerConfig cfg = sampler(a.common);

    std::map<std::string, double> values;
    if (a.method == "optimize" || a.method == "all") values["optimize"] = nu_direct(t, rho, cfg).value;
    if (rho.at_most_two()) {
        if (a.method == "mathias-okubo" || a.method == "all") values["mathias-okubo"] = mo_radius(t, rho);
        if (a.method == "bisection" || a.method == "all")
            values["bisection"] = nu_by_measure_bisection(t, rho, 1e-7, cfg).value;
    }
    double disagreement = 0.0;
    for (const auto& [m1, v1] : values)
        for (const auto& [m2, v2] : values) disagreement = std::max(disagreement, std::abs(v1 - v2));

    Json out;
    out["seed"] = a.common.seed;
    out["rho"] = rho.rho();
    out["method"] = a.method;
    out["values"] = Json::object();
    for (const char* m : {"optimize", "mathias-okubo", "bisection"})
        if (values.contains(m)) out["values"][m] = values[m];
    out["max_disagreement"] = disagreement;
    emit(out);
    if (disagreement > 1e-3) {
        std::cerr << "methods disagree by more than 1e-3\n";
        return kDisagreement;
    }
    return kOk;
}

struct FigureArgs {
    std::string name;
    std::string out = ".";
    std::uint64_t seed = 42;
    std::size_t samples = 0;
};

int cmd_figure(const FigureArgs& a) {
    FigureOptions opts;
    opts.seed = a.seed;
    opts.n_samples = a.samples;
    FigureReport rep = make_figure(a.name, a.out, opts);
    Json files = Json::array();
    for (const auto& f : rep.files) files.push_back(f.string());
    rep.summary["files"] = std::move(files);
    emit(rep.summary);
    return kOk;
}

struct RhoArgs {
    Common common;
    double rho = 1.0;
    int degree = 4;
    double q = 0.9;
};

int cmd_crho(const RhoArgs& a) {
    const RhoParam rho(a.rho);
    const ComplexMatrix t = load(a.common);
    emit(certificate_json(c_rho_membership(t, rho, sampler(a.common)), rho, a.common.seed));
    return kOk;
}

int cmd_psi(const RhoArgs& a) {
    const RhoParam rho(a.rho);
    const ComplexMatrix t = load(a.common);
    emit(psi_json(psi_lower_bound(t, rho, a.degree, sampler(a.common)), a.common.seed));
    return kOk;
}

int cmd_compare(const RhoArgs& a) {
    const RhoParam rho(a.rho);
    const ComplexMatrix t = load(a.common);
    const SamplerConfig cfg = sampler(a.common);
    const std::size_t n = a.common.samples ? a.common.samples : default_sample_count(t.size());

    std::vector<std::pair<std::string, ConvexRegion>> sets;
    sets.emplace_back("w_rho", deformed_range(t, rho, cfg).region);
    sets.emplace_back("numerical_range", numerical_range(t));
    sets.emplace_back("q_range_scaled", q_numerical_range(t, a.q, std::min<std::size_t>(n, 20'000), a.common.seed).scaled);
    if (rho.at_most_two()) sets.emplace_back("mo_range", mo_range(t, rho));

    Json out;
    out["seed"] = a.common.seed;
    out["rho"] = rho.rho();
    out["q"] = a.q;
    out["sets"] = Json::object();
    for (const auto& [name, region] : sets)
        out["sets"][name] = {{"vertices", region.size()}, {"max_modulus", region.max_modulus()}};
    // margin < 0 means `inner` sticks out of `outer` by that much in some direction
    out["inclusions"] = Json::array();
    for (const auto& [outer, e] : sets)
        for (const auto& [inner, f] : sets) {
            if (outer == inner) continue;
            const Containment c = contains(e, f, 5e-3);
            out["inclusions"].push_back({{"inner", inner}, {"outer", outer}, {"margin", c.margin}});
        }
    if (rho.at_most_two()) {
        const ProductExcess e = product_range_excess(t, rho, sets.front().second);
        out["product_range"] = {{"excess", e.excess}, {"point", {e.point.real(), e.point.imag()}}, {"witness", e.witness}};
    }
    emit(out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deformed numerical ranges and radii of complex matrices"};
    app.require_subcommand(1);

    RangeArgs range;
    auto* c_range = app.add_subcommand("range", "sample and hull W^rho(T)");
    add_common(c_range, range.common);
    c_range->add_option("--rho", range.rho, "one or more rho >= 1")->required()->expected(1, -1);
    c_range->add_option("--out-csv", range.out_csv, "cloud CSV (hull goes to <stem>_hull.csv unless --out-hull)");
    c_range->add_option("--out-hull", range.out_hull, "hull CSV");
    c_range->add_option("--out-svg", range.out_svg, "SVG overlay");
    c_range->add_option("--budget", range.budget, "cap on objective evaluations")->check(CLI::PositiveNumber);

    RadiusArgs radius;
    auto* c_radius = app.add_subcommand("radius", "nu_rho(T) by one or all methods");
    add_common(c_radius, radius.common);
    c_radius->add_option("--rho", radius.rho)->required();
    c_radius->add_option("--method", radius.method)
        ->check(CLI::IsMember({"optimize", "mathias-okubo", "bisection", "all"}))
        ->capture_default_str();

    FigureArgs figure;
    auto* c_figure = app.add_subcommand("figure", "regenerate fig1, fig2 or fig7");
    c_figure->add_option("--name", figure.name)->required();
    c_figure->add_option("--out", figure.out, "output directory")->capture_default_str();
    c_figure->add_option("--seed", figure.seed)->capture_default_str();
    c_figure->add_option("--samples", figure.samples)->check(CLI::PositiveNumber);

    RhoArgs crho, psi, compare;
    auto* c_crho = app.add_subcommand("crho", "C_rho membership certificate");
    add_common(c_crho, crho.common);
    c_crho->add_option("--rho", crho.rho)->required();
    auto* c_psi = app.add_subcommand("psi", "lower bound for Psi_rho(T)");
    add_common(c_psi, psi.common);
    c_psi->add_option("--rho", psi.rho)->required();
    c_psi->add_option("--degree", psi.degree)->check(CLI::Range(0, kMaxPolynomialDegree))->capture_default_str();
    auto* c_compare = app.add_subcommand("compare", "pairwise inclusion margins of the companion sets");
    add_common(c_compare, compare.common);
    c_compare->add_option("--rho", compare.rho)->required();
    c_compare->add_option("--q", compare.q)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (c_range->parsed()) return cmd_range(range);
        if (c_radius->parsed()) return cmd_radius(radius);
        if (c_figure->parsed()) return cmd_figure(figure);
        if (c_crho->parsed()) return cmd_crho(crho);
        if (c_psi->parsed()) return cmd_psi(psi);
        if (c_compare->parsed()) return cmd_compare(compare);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUnexpected;
    }
    return kInvalid;
}
