#include "dnr/figures.hpp"

#include "dnr/companion.hpp"
#include "dnr/error.hpp"
#include "dnr/svg.hpp"

#include <array>
#include <fstream>

namespace dnr {

namespace {

namespace fs = std::filesystem;

struct CloudStyle {
    double rho;
    const char* tag;  // used in file names
    Marker marker;
    const char* color;
    const char* label;
};

void write_csv(const fs::path& path, std::span<const Complex> z, FigureReport& report) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
    write_points_csv(out, z);
    report.files.push_back(path);
}

void write_svg(const fs::path& path, const SvgPlot& plot, FigureReport& report) {
    plot.save(path.string());
    report.files.push_back(path);
}

const std::array<const char*, 3> kTitles{"T = diag(i, 1)", "T = [[i, 0], [1, 1]]", "T = [[-0.1, 1], [0, 1]]"};

FigureReport cloud_panels(const std::string& name, const std::array<CloudStyle, 3>& styles, const fs::path& dir,
                          const FigureOptions& opts) {
    FigureReport report;
    report.summary["figure"] = name;
    report.summary["seed"] = opts.seed;
    Json panels = Json::array();
    const auto mats = fig12_matrices();
    for (std::size_t m = 0; m < mats.size(); ++m) {
        const ComplexMatrix& t = mats[m];
        const std::size_t n = opts.n_samples ? opts.n_samples : default_sample_count(t.size());
        SvgPlot plot(kTitles[m]);
        Json panel;
        panel["matrix"] = kTitles[m];
        Json clouds = Json::array();
        for (const auto& st : styles) {
            CloudStats stats;
            const PointCloud cloud = sample_cloud(t, RhoParam(st.rho), n, opts.seed, false, &stats);
            const std::string stem = name + "_T" + std::to_string(m + 1) + "_rho" + st.tag;
            write_csv(dir / (stem + ".csv"), cloud.points, report);
            plot.points(cloud.points, st.marker, st.color, st.label);
            const double extent = std::max(convex_hull(cloud).max_modulus(), 1e-12);
            clouds.push_back({{"rho", st.rho},
                              {"n_samples", stats.n_samples},
                              {"n_feasible", stats.n_feasible},
                              {"components_at_2pct", cloud_components(cloud.points, 0.02 * extent)}});
        }
        const auto eig = spectrum(t).eigenvalues;
        plot.points(eig, Marker::Star, "gold", "eigenvalues");
        write_svg(dir / (name + "_T" + std::to_string(m + 1) + ".svg"), plot, report);
        panel["clouds"] = std::move(clouds);
        panels.push_back(std::move(panel));
    }
    report.summary["panels"] = std::move(panels);
    return report;
}

FigureReport fig7(const fs::path& dir, const FigureOptions& opts) {
    const ComplexMatrix t = fig7_matrix();
    const RhoParam rho(1.62);
    const double q = 0.9;
    SamplerConfig cfg;
    cfg.seed = opts.seed;
    cfg.n_samples = opts.n_samples;
    const std::size_t n = opts.n_samples ? opts.n_samples : default_sample_count(t.size());

    FigureReport report;
    const PointCloud v = sample_cloud(t, rho, n, opts.seed);
    std::vector<Complex> v_points;
    for (Complex z : v.points)
        if (z != 0.0) v_points.push_back(z);
    const RangeResult range = deformed_range(t, rho, cfg);
    const ConvexRegion mo = mo_range(t, rho);
    const QRange qr = q_numerical_range(t, q, std::min<std::size_t>(n, 20'000), opts.seed);
    const GapReport gap = v_rho_gap(t, rho, v);
    const double tnorm = operator_norm(t);
    const auto eig = spectrum(t).eigenvalues;

    write_csv(dir / "fig7_v_rho.csv", v_points, report);
    write_csv(dir / "fig7_w_rho_hull.csv", range.region.vertices(), report);
    write_csv(dir / "fig7_mo_hull.csv", mo.vertices(), report);
    write_csv(dir / "fig7_q_scaled_hull.csv", qr.scaled.vertices(), report);
    write_csv(dir / "fig7_eigenvalues.csv", eig, report);

    SvgPlot plot("T = [[-1, 0, 0], [0, 1, i], [0, 1, 0]],  rho = 1.62,  q = 0.9");
    plot.points(v_points, Marker::Dot, "green", "V_rho(T)");
    plot.polygon(mo.vertices(), "blue", "W(B_rho (x) T)");
    plot.polygon(qr.scaled.vertices(), "red", "q^-1 W(T:q)");
    plot.circle(0.0, range.nu, "black", "|z| = nu_rho(T)");
    plot.circle(0.0, tnorm, "gray", "|z| = ||T||");
    plot.circle(0.0, gap.bound, "darkgreen", "|z| = sqrt(1-r) sigma_min(T)");
    plot.points(eig, Marker::Star, "gold", "eigenvalues");
    plot.origin_cross();
    write_svg(dir / "fig7.svg", plot, report);

    auto& s = report.summary;
    s["figure"] = "fig7";
    s["seed"] = opts.seed;
    s["rho"] = rho.rho();
    s["r"] = rho.r();
    s["q"] = q;
    s["sigma_min"] = gap.sigma_min;
    s["gap_bound"] = gap.bound;
    s["gap_alt_radicand"] = gap.alt_radicand;
    s["v_rho_min_modulus"] = gap.min_modulus;
    s["nu_rho"] = range.nu;
    s["norm"] = tnorm;
    s["margin_in_q_range"] = contains(qr.scaled, range.region, 5e-3).margin;
    s["margin_in_mo_range"] = contains(mo, range.region, 5e-3).margin;
    return report;
}

}  // namespace

ComplexMatrix fig7_matrix() {
    const Complex i(0.0, 1.0);
    return {{-1.0, 0.0, 0.0}, {0.0, 1.0, i}, {0.0, 1.0, 0.0}};
}

std::vector<ComplexMatrix> fig12_matrices() {
    const Complex i(0.0, 1.0);
    return {ComplexMatrix{{i, 0.0}, {0.0, 1.0}}, ComplexMatrix{{i, 0.0}, {1.0, 1.0}},
            ComplexMatrix{{-0.1, 1.0}, {0.0, 1.0}}};
}

FigureReport make_figure(const std::string& name, const fs::path& dir, const FigureOptions& opts) {
    if (name != "fig1" && name != "fig2" && name != "fig7")
        throw Error(ErrorKind::InvalidInput, "unknown figure '" + name + "' (expected fig1, fig2 or fig7)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::InvalidInput, "cannot create " + dir.string() + ": " + ec.message());
    if (name == "fig1")
        return cloud_panels(name,
                            {{{1.0, "1", Marker::Circle, "blue", "rho=1 (blue circles)"},
                              {4.0 / 3.0, "4_3", Marker::Cross, "red", "rho=4/3 (red crosses)"},
                              {2.0, "2", Marker::Dot, "black", "rho=2 (numerical range, black dots)"}}},
                            dir, opts);
    if (name == "fig2")
        return cloud_panels(name,
                            {{{2.0, "2", Marker::Dot, "blue", "rho=2 (numerical range, blue)"},
                              {4.0, "4", Marker::Dot, "orange", "rho=4 (orange)"},
                              {20.0, "20", Marker::Dot, "black", "rho=20 (black)"}}},
                            dir, opts);
    return fig7(dir, opts);
}

}  // namespace dnr
