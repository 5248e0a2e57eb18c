#include "dnr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dnr {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

// One Nelder-Mead run (minimizing g = -f) from a simplex of size `step`.
void run_simplex(const Objective& f, Vertex& best, double step, int budget, double f_tol,
                 int& evaluations) {
    const std::size_t d = best.x.size();
    const double dd = static_cast<double>(d);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dd;
    const double gamma = 0.75 - 0.5 / dd;
    const double delta = 1.0 - 1.0 / dd;

    auto eval = [&](const std::vector<double>& x) {
        ++evaluations;
        const double v = f(x);
        return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
    };

    std::vector<Vertex> s;
    s.reserve(d + 1);
    s.push_back({best.x, -best.f});
    for (std::size_t k = 0; k < d; ++k) {
        Vertex v{best.x, 0.0};
        v.x[k] += step;
        v.f = eval(v.x);
        s.push_back(std::move(v));
    }

    std::vector<double> centroid(d), xr(d), xe(d), xc(d);
    const int limit = evaluations + budget;
    while (evaluations < limit) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double spread = s.back().f - s.front().f;
        if (spread <= f_tol * (std::abs(s.front().f) + 1e-300)) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < d; ++k)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += s[k].x[j];
        for (auto& c : centroid) c /= dd;

        Vertex& worst = s.back();
        for (std::size_t j = 0; j < d; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - worst.x[j]);
        const double fr = eval(xr);
        if (fr < s.front().f) {
            for (std::size_t j = 0; j < d; ++j) xe[j] = centroid[j] + beta * (xr[j] - centroid[j]);
            const double fe = eval(xe);
            if (fe < fr) worst = {xe, fe};
            else worst = {xr, fr};
            continue;
        }
        if (fr < s[d - 1].f) {
            worst = {xr, fr};
            continue;
        }
        const bool outside = fr < worst.f;
        for (std::size_t j = 0; j < d; ++j)
            xc[j] = outside ? centroid[j] + gamma * (xr[j] - centroid[j])
                            : centroid[j] - gamma * (centroid[j] - worst.x[j]);
        const double fc = eval(xc);
        if (fc < std::min(fr, worst.f)) {
            worst = {xc, fc};
            continue;
        }
        for (std::size_t k = 1; k <= d; ++k) {
            for (std::size_t j = 0; j < d; ++j) s[k].x[j] = s[0].x[j] + delta * (s[k].x[j] - s[0].x[j]);
            s[k].f = eval(s[k].x);
        }
    }
    const auto it = std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (-it->f > best.f) best = {it->x, -it->f};
}

}  // namespace

OptimResult nelder_mead_maximize(const Objective& f, std::vector<double> x0, const NelderMeadOptions& options) {
    OptimResult r;
    if (x0.empty()) {
        r.f = f(x0);
        r.evaluations = 1;
        return r;
    }
    Vertex best{x0, f(x0)};
    r.evaluations = 1;
    if (!std::isfinite(best.f)) best.f = -std::numeric_limits<double>::infinity();
    double step = options.initial_step;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        const int remaining = options.max_evaluations - r.evaluations;
        if (remaining <= static_cast<int>(x0.size()) + 1) break;
        const double before = best.f;
        run_simplex(f, best, step, remaining, options.f_tol, r.evaluations);
        if (restart > 0 && best.f - before <= options.f_tol * (std::abs(best.f) + 1e-300)) break;
        step *= 0.25;
    }
    r.x = std::move(best.x);
    r.f = best.f;
    return r;
}

double golden_section_maximize(const std::function<double(double)>& f, double a, double b, double tol,
                               double* best_value) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (std::abs(b - a) > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = fc > fd ? c : d;
    if (best_value) *best_value = std::max(fc, fd);
    return x;
}

}  // namespace dnr
