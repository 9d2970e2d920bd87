#include "qcs/rules.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcs/error.hpp"

namespace qcs {

void AlphaDistribution::validate() const {
    if (!(lo > 0.5 && lo < hi && hi < 1.0)) {
        throw ConfigError("alpha distribution must satisfy 1/2 < lo < hi < 1, got [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    }
}

double AlphaDistribution::draw(RandomStream& rng) const {
    return rng.uniform(lo, hi);
}

int threshold_count(double alpha, int n) {
    if (n < 1) {
        throw InputError("threshold_count: n must be positive");
    }
    auto k = static_cast<int>(std::floor(alpha * n));
    while (static_cast<double>(k + 1) / n <= alpha) {
        ++k;
    }
    while (k > 0 && static_cast<double>(k) / n > alpha) {
        --k;
    }
    return k;
}

int acceptance_threshold(int m_r, double kappa, double sigmas) {
    if (m_r < 0) {
        throw InputError("acceptance_threshold: negative count");
    }
    if (m_r == 0) {
        return 0;
    }
    const double agree = 1.0 - kappa / 2.0;
    const double mu = m_r * agree;
    const double sigma = std::sqrt(m_r * agree * (kappa / 2.0));
    // The slack absorbs rounding when mu - k*sigma is an exact integer.
    const double bound = std::ceil(mu - sigmas * sigma - 1e-9);
    return static_cast<int>(std::clamp(bound, 0.0, static_cast<double>(m_r)));
}

}  // namespace qcs
