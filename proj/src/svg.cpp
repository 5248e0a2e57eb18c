#include "dnr/svg.hpp"

#include "dnr/error.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <numbers>

namespace dnr {

namespace {

constexpr double kSize = 800.0;
constexpr double kPad = 60.0;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string marker_svg(Marker m, double x, double y, const std::string& color) {
    switch (m) {
        case Marker::Dot:
            return fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"1.2\" style=\"fill:{}\"/>", x, y, color);
        case Marker::Circle:
            return fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" style=\"fill:none;stroke:{};stroke-width:0.6\"/>",
                               x, y, color);
        case Marker::Cross:
            return fmt::format("<path d=\"M{:.2f} {:.2f}l5 5M{:.2f} {:.2f}l-5 5\" style=\"stroke:{};stroke-width:0.7\"/>",
                               x - 2.5, y - 2.5, x + 2.5, y - 2.5, color);
        case Marker::Star: {
            std::string pts;
            for (int k = 0; k < 10; ++k) {
                const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
                const double rad = k % 2 == 0 ? 8.0 : 3.5;
                pts += fmt::format("{:.2f},{:.2f} ", x + rad * std::cos(a), y + rad * std::sin(a));
            }
            return fmt::format("<polygon points=\"{}\" style=\"fill:{};stroke:black;stroke-width:0.5\"/>", pts, color);
        }
    }
    return {};
}

}  // namespace

void SvgPlot::points(std::span<const Complex> z, Marker marker, std::string color, std::string label,
                     std::size_t max_points) {
    Layer l{Layer::Points, {}, marker, std::move(color), std::move(label), false, 0.0, 0.0};
    const std::size_t stride = z.size() > max_points && max_points > 0 ? (z.size() + max_points - 1) / max_points : 1;
    for (std::size_t i = 0; i < z.size(); i += stride) l.z.push_back(z[i]);
    layers_.push_back(std::move(l));
}

void SvgPlot::polygon(std::span<const Complex> vertices, std::string color, std::string label, bool dashed) {
    Layer l{Layer::Polygon, {vertices.begin(), vertices.end()}, Marker::Dot, std::move(color), std::move(label), dashed,
            0.0, 0.0};
    layers_.push_back(std::move(l));
}

void SvgPlot::circle(Complex center, double radius, std::string color, std::string label, bool dashed) {
    Layer l{Layer::Circle, {}, Marker::Dot, std::move(color), std::move(label), dashed, center, radius};
    layers_.push_back(std::move(l));
}

std::string SvgPlot::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    auto grow = [&](Complex z) {
        xmin = std::min(xmin, z.real());
        xmax = std::max(xmax, z.real());
        ymin = std::min(ymin, z.imag());
        ymax = std::max(ymax, z.imag());
    };
    for (const auto& l : layers_) {
        for (Complex z : l.z) grow(z);
        if (l.kind == Layer::Circle) {
            grow(l.center + Complex(l.radius, l.radius));
            grow(l.center - Complex(l.radius, l.radius));
        }
    }
    for (Complex z : crosses_) grow(z);
    if (!std::isfinite(xmin)) xmin = ymin = -1.0, xmax = ymax = 1.0;

    // Equal aspect: one scale for both axes, centered data box.
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9}) * 1.08;
    const double cx = 0.5 * (xmin + xmax), cy = 0.5 * (ymin + ymax);
    // The legend sits above the data box.
    const auto n_labels = std::count_if(layers_.begin(), layers_.end(), [](const Layer& l) { return !l.label.empty(); });
    const double top = std::max(kPad, 34.0 + 18.0 * static_cast<double>(n_labels) + 16.0);
    const double scale = (kSize - kPad - top) / span;
    const double mid_y = 0.5 * (top + kSize - kPad);
    auto px = [&](Complex z) { return kSize / 2 + (z.real() - cx) * scale; };
    auto py = [&](Complex z) { return mid_y - (z.imag() - cy) * scale; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" style=\"fill:white\"/>\n";
    if (!title_.empty())
        s += fmt::format("<text x=\"400\" y=\"24\" style=\"font:15px sans-serif;text-anchor:middle\">{}</text>\n",
                         escape(title_));

    // Axes through the origin when visible, otherwise along the frame.
    const double x0 = std::clamp(px(0.0), kPad / 2, kSize - kPad / 2);
    const double y0 = std::clamp(py(0.0), top - 8, kSize - kPad / 2);
    s += fmt::format("<path d=\"M{:.2f} {:.2f}H{:.2f}M{:.2f} {:.2f}V{:.2f}\" style=\"stroke:#999;stroke-width:0.8\"/>\n",
                     kPad / 2, y0, kSize - kPad / 2, x0, top - 8, kSize - kPad / 2);
    const double half = 0.5 * (kSize - 2 * kPad) / scale;
    const double half_y = 0.5 * span;
    s += fmt::format(
        "<text x=\"{:.0f}\" y=\"{:.0f}\" style=\"font:11px sans-serif;fill:#555\">Re [{:.4g}, {:.4g}]  Im [{:.4g}, {:.4g}]</text>\n",
        kPad / 2, kSize - 10, cx - half, cx + half, cy - half_y, cy + half_y);

    for (const auto& l : layers_) {
        const std::string dash = l.dashed ? ";stroke-dasharray:6 4" : "";
        if (l.kind == Layer::Points) {
            s += "<g>\n";
            for (Complex z : l.z) s += marker_svg(l.marker, px(z), py(z), l.color) + "\n";
            s += "</g>\n";
        } else if (l.kind == Layer::Polygon) {
            std::string pts;
            for (Complex z : l.z) pts += fmt::format("{:.2f},{:.2f} ", px(z), py(z));
            s += fmt::format("<polygon points=\"{}\" style=\"fill:none;stroke:{};stroke-width:1.6{}\"/>\n", pts, l.color,
                             dash);
        } else {
            s += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.2f}\" style=\"fill:none;stroke:{};stroke-width:1.2{}\"/>\n",
                             px(l.center), py(l.center), l.radius * scale, l.color, dash);
        }
    }
    for (Complex z : crosses_)
        s += fmt::format("<path d=\"M{:.2f} {:.2f}h12M{:.2f} {:.2f}v12\" style=\"stroke:black;stroke-width:1.5\"/>\n",
                         px(z) - 6, py(z), px(z), py(z) - 6);

    // Legend box in the top-left corner.
    if (n_labels > 0)
        s += fmt::format("<rect x=\"34\" y=\"34\" width=\"270\" height=\"{}\" style=\"fill:white;fill-opacity:0.85;stroke:#ccc\"/>\n",
                         18 * n_labels + 8);
    double ly = 50;
    for (const auto& l : layers_) {
        if (l.label.empty()) continue;
        if (l.kind == Layer::Points)
            s += marker_svg(l.marker, 50, ly - 4, l.color);
        else
            s += fmt::format("<path d=\"M40 {:.0f}h20\" style=\"stroke:{};stroke-width:2{}\"/>", ly - 4, l.color,
                             l.dashed ? ";stroke-dasharray:4 3" : "");
        s += fmt::format("<text x=\"68\" y=\"{:.0f}\" style=\"font:13px sans-serif\">{}</text>\n", ly, escape(l.label));
        ly += 18;
    }
    s += "</svg>\n";
    return s;
}

void SvgPlot::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << render();
}

}  // namespace dnr
