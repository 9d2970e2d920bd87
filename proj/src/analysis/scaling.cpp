#include <cmath>

#include "qcs/analysis.hpp"
#include "qcs/analysis/numeric.hpp"
#include "qcs/error.hpp"

namespace qcs::analysis {

ScalingFit scaling_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) {
        throw InputError("scaling fit needs at least 3 points, got " + std::to_string(points.size()));
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [n, value] : points) {
        if (!(n > 0.0) || !(value > 0.0)) {
            throw InputError("scaling fit needs positive N and values");
        }
        xs.push_back(std::log(n));
        ys.push_back(std::log(value));
    }
    const double count = static_cast<double>(xs.size());
    KahanSum sx;
    KahanSum sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const double mx = sx.value() / count;
    const double my = sy.value() / count;
    KahanSum sxx;
    KahanSum sxy;
    KahanSum syy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0)) {
        throw NumericError("scaling fit needs at least two distinct N");
    }
    ScalingFit fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    // A constant series is fitted exactly.
    fit.r_squared = syy.value() > 0.0 ? (sxy.value() * sxy.value()) / (sxx.value() * syy.value()) : 1.0;
    return fit;
}

}  // namespace qcs::analysis
