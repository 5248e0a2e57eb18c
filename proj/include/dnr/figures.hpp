#pragma once

#include "dnr/io.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dnr {

struct FigureOptions {
    std::uint64_t seed = 42;
    std::size_t n_samples = 0;  // 0: default for the dimension
};

struct FigureReport {
    std::vector<std::filesystem::path> files;
    Json summary;
};

/// The matrix used by fig7: [[-1, 0, 0], [0, 1, i], [0, 1, 0]].
ComplexMatrix fig7_matrix();

/// The three 2x2 matrices shared by fig1 and fig2.
std::vector<ComplexMatrix> fig12_matrices();

/// Writes the SVG and CSV files of figure `name` (fig1, fig2 or fig7) into
/// `dir`, creating it if needed. Throws InvalidInput for an unknown name.
FigureReport make_figure(const std::string& name, const std::filesystem::path& dir, const FigureOptions& opts = {});

}  // namespace dnr
