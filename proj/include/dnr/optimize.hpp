#pragma once

#include <functional>
#include <span>
#include <vector>

namespace dnr {

struct NelderMeadOptions {
    double initial_step = 0.1;
    int max_evaluations = 4000;
    double f_tol = 1e-14;   // relative spread of simplex values
    int max_restarts = 6;
};

struct OptimResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free maximization (adaptive-parameter Nelder-Mead with
/// restarts around the incumbent).
OptimResult nelder_mead_maximize(const Objective& f, std::vector<double> x0,
                                 const NelderMeadOptions& options = {});

/// Golden-section search for a maximum of a unimodal f on [a, b].
/// Returns the abscissa; `best_value` receives f there.
double golden_section_maximize(const std::function<double(double)>& f, double a, double b,
                               double tol, double* best_value = nullptr);

}  // namespace dnr
