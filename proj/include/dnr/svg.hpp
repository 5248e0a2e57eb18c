#pragma once

#include "dnr/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace dnr {

enum class Marker { Dot, Circle, Cross, Star };

/// Self-contained 800x800 SVG scatter/outline plot of the complex plane with
/// equal axis scaling. Everything is styled inline.
class SvgPlot {
public:
    explicit SvgPlot(std::string title = {}) : title_(std::move(title)) {}

    /// At most `max_points` markers are drawn (an even stride through the data).
    void points(std::span<const Complex> z, Marker marker, std::string color, std::string label,
                std::size_t max_points = 6000);
    void polygon(std::span<const Complex> vertices, std::string color, std::string label, bool dashed = false);
    void circle(Complex center, double radius, std::string color, std::string label, bool dashed = true);
    /// Small cross at z, not part of the legend.
    void origin_cross(Complex z = 0.0) { crosses_.push_back(z); }

    std::string render() const;
    void save(const std::string& path) const;

private:
    struct Layer {
        enum Kind { Points, Polygon, Circle } kind;
        std::vector<Complex> z;
        Marker marker = Marker::Dot;
        std::string color;
        std::string label;
        bool dashed = false;
        Complex center;
        double radius = 0.0;
    };
    std::string title_;
    std::vector<Layer> layers_;
    std::vector<Complex> crosses_;
};

}  // namespace dnr
