#include "qcs/cli/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qcs/error.hpp"

namespace qcs::cli {

namespace {

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double to_unit(double v) const {
        if (log) {
            return (std::log10(v) - lo) / (hi - lo);
        }
        return (v - lo) / (hi - lo);
    }
};

// Axis in plotting coordinates (log10 for log axes), padded so that a
// constant series still gets a visible band.
Axis make_axis(double lo, double hi, bool log) {
    Axis a;
    a.log = log;
    if (log) {
        lo = std::log10(lo);
        hi = std::log10(hi);
        a.lo = std::floor(lo);
        a.hi = std::max(std::ceil(hi), a.lo + 1.0);
        return a;
    }
    if (hi - lo < 1e-12) {
        const double pad = std::max(std::abs(lo) * 0.1, 1e-3);
        lo -= pad;
        hi += pad;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
}

std::vector<double> linear_ticks(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        step = mult * mag;
        if (step >= raw) {
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return out;
}

// Tick values in data space.
std::vector<double> ticks(const Axis& a) {
    if (!a.log) {
        return linear_ticks(a.lo, a.hi);
    }
    std::vector<double> out;
    for (double e = a.lo; e <= a.hi + 1e-9; e += 1.0) {
        out.push_back(std::pow(10.0, e));
    }
    return out;
}

}  // namespace

std::string render_line_chart(const std::vector<Series>& series, const ChartSpec& spec) {
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const Series& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw InputError("chart points must be finite");
            }
            if ((spec.log_x && x <= 0.0) || (spec.log_y && y <= 0.0)) {
                throw InputError("log axis needs positive values");
            }
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!std::isfinite(x_lo)) {
        throw InputError("chart has no points");
    }
    if (!spec.log_y) {
        y_lo = std::min(y_lo, 0.0);
    }
    const Axis ax = make_axis(x_lo, x_hi, spec.log_x);
    const Axis ay = make_axis(y_lo, y_hi, spec.log_y);

    const double left = 80.0;
    const double right = 30.0 + (series.size() > 1 ? 130.0 : 0.0);
    const double top = 40.0;
    const double bottom = 60.0;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    auto px = [&](double x) { return left + ax.to_unit(x) * pw; };
    auto py = [&](double y) { return top + (1.0 - ay.to_unit(y)) * ph; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n",
        spec.width, spec.height, spec.width, spec.height);
    out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", spec.width, spec.height);
    out += fmt::format("<text x=\"{:.1f}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                       left + pw / 2.0, escape(spec.title));

    for (double t : ticks(ax)) {
        const double x = px(t);
        out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"#e0e0e0\"/>\n",
                           x, top, top + ph);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{:g}</text>\n", x,
                           top + ph + 18.0, t);
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        out += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#e0e0e0\"/>\n",
                           left, y, left + pw);
        out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{:g}</text>\n", left - 6.0, y + 4.0,
                           t);
    }
    out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
                       "stroke=\"black\"/>\n",
                       left, top, pw, ph);
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2.0,
                       static_cast<double>(spec.height) - 18.0, escape(spec.x_label));
    out += fmt::format("<text transform=\"translate(20 {:.1f}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
                       top + ph / 2.0, escape(spec.y_label));

    for (std::size_t i = 0; i < series.size(); ++i) {
        const Series& s = series[i];
        const char* colour = kPalette[i % kPalette.size()];
        std::string path;
        for (const auto& [x, y] : s.points) {
            path += fmt::format("{}{:.2f},{:.2f}", path.empty() ? "" : " ", px(x), py(y));
        }
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour,
                           path);
        if (s.points.size() == 1) {
            out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", px(s.points[0].first),
                               py(s.points[0].second), colour);
        }
        if (series.size() > 1) {
            const double ly = top + 10.0 + 18.0 * static_cast<double>(i);
            const double lx = left + pw + 12.0;
            out += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
                               "stroke-width=\"2\"/>\n",
                               lx, ly, lx + 20.0, ly, colour);
            out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 26.0, ly + 4.0, escape(s.label));
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace qcs::cli
