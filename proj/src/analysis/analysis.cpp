#include "qcs/analysis.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "formulas.hpp"
#include "kernels.hpp"
#include "qcs/analysis/exact.hpp"
#include "qcs/error.hpp"

namespace qcs::analysis {

namespace {

using detail::DoubleKernel;

// Log-factorial tables are reused per thread and only grow.
const DoubleKernel& kernel_for(int n) {
    thread_local std::unique_ptr<DoubleKernel> cached;
    const int needed = 4 * n + 1;
    if (!cached || cached->capacity() < needed) {
        cached = std::make_unique<DoubleKernel>(needed);
    }
    return *cached;
}

void check_n(int n) {
    if (n < 1) {
        throw InputError("N must be positive");
    }
}

void check_m(int n, int m) {
    check_n(n);
    if (m < 0 || m > 4 * n) {
        throw InputError("step m=" + std::to_string(m) + " outside [0, " + std::to_string(4 * n) + "]");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw InputError("alpha must lie in (1/2, 1)");
    }
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InputError(std::string(what) + " must lie in [0, 1]");
    }
}

void check_corr(const CorrelationPair& c) {
    check_probability(c.p_eq, "p_eq");
    check_probability(c.p_neq, "p_neq");
}

std::vector<int> accept_table(int n, double kappa, double sigmas) {
    if (!(sigmas > 0.0)) {
        throw InputError("acceptance sigmas must be positive");
    }
    return detail::acceptance_table<DoubleKernel>(n, kappa, sigmas);
}

}  // namespace

std::string_view mode_name(CheatMode mode) {
    switch (mode) {
        case CheatMode::HonestNoiseless: return "HonestNoiseless";
        case CheatMode::HonestNoisy: return "HonestNoisy";
        case CheatMode::DishonestNoisy: return "DishonestNoisy";
    }
    return "?";
}

std::optional<CheatMode> parse_mode(std::string_view name) {
    for (const auto mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
        if (name == mode_name(mode)) {
            return mode;
        }
    }
    return std::nullopt;
}

int received_count(int m, Role role) {
    return role == Role::AliceView ? std::max(m - 1, 0) : m;
}

double q_ell(int n, int m, int ell, Role role) {
    check_m(n, m);
    if (ell < 0 || ell > n) {
        throw InputError("ell outside [0, N]");
    }
    return detail::q_ell(kernel_for(n), n, received_count(m, role), ell);
}

double p_bind_noiseless_given_ell(int n, double alpha, int ell) {
    check_n(n);
    check_alpha(alpha);
    if (ell < 0 || ell > n) {
        throw InputError("ell outside [0, N]");
    }
    return detail::bind_noiseless_given_ell(kernel_for(n), n, threshold_count(alpha, n), ell);
}

double p_bind_noiseless(int n, int m, double alpha, Role role) {
    check_m(n, m);
    check_alpha(alpha);
    return detail::bind_noiseless(kernel_for(n), n, received_count(m, role), threshold_count(alpha, n));
}

double p_cheat_noiseless(int n, int m, double alpha) {
    return p_cheat(n, m, alpha, 0.0, 0.0, CheatMode::HonestNoiseless);
}

CorrelationPair correlation(double kappa) {
    check_probability(kappa, "kappa");
    return {1.0 - kappa / 2.0, kappa / 2.0};
}

MeanVar mean_var(int m_r, double kappa) {
    if (m_r < 0) {
        throw InputError("mean_var: negative count");
    }
    const CorrelationPair c = correlation(kappa);
    MeanVar out;
    out.mu = m_r * c.p_eq;
    out.variance = m_r * c.p_eq * c.p_neq;
    out.sigma = std::sqrt(out.variance);
    return out;
}

CorrelationPair flipped_correlation(double f, double kappa) {
    check_probability(f, "f");
    const CorrelationPair c = correlation(kappa);
    const double eq = (1.0 - f) * c.p_eq + f * c.p_neq;
    const double neq = (1.0 - f) * c.p_neq + f * c.p_eq;
    return {eq, neq};
}

double p_bth(int n, double alpha, double kappa) {
    check_n(n);
    check_alpha(alpha);
    return detail::bth(kernel_for(n), n, threshold_count(alpha, n), correlation(kappa));
}

double p_bta(int n, int m, double alpha, const CorrelationPair& corr, Role role) {
    check_m(n, m);
    check_alpha(alpha);
    check_corr(corr);
    return detail::bta(kernel_for(n), n, received_count(m, role), threshold_count(alpha, n), corr);
}

double p_pass_bound(int n, int m, double kappa, const CorrelationPair& corr, PassDirection direction,
                    Stagger stagger, double sigmas) {
    check_m(n, m);
    check_corr(corr);
    const Role role = direction == PassDirection::AlicesTestOfBob && stagger == Stagger::AliceFirst
                          ? Role::AliceView
                          : Role::BobView;
    return detail::pass_bound(kernel_for(n), n, received_count(m, role), corr, accept_table(n, kappa, sigmas));
}

double p_cheat(int n, int m, double alpha, double kappa, double f, CheatMode mode, double sigmas,
               NumericMode numeric) {
    check_m(n, m);
    check_alpha(alpha);
    check_probability(kappa, "kappa");
    check_probability(f, "f");
    if (numeric == NumericMode::ExactRational) {
        const exact::Evaluator ev;
        return ev.p_cheat(n, m, alpha, exact::Rational(kappa), exact::Rational(f), mode, exact::Rational(sigmas))
            .get_d();
    }
    return detail::cheat(kernel_for(n), n, m, threshold_count(alpha, n), correlation(kappa),
                         flipped_correlation(f, kappa), mode, accept_table(n, kappa, sigmas));
}

std::vector<ThresholdWeight> threshold_weights(int n, const AlphaDistribution& dist) {
    check_n(n);
    std::vector<ThresholdWeight> out;
    for (const auto& [k, w] : detail::weights<DoubleKernel>(n, dist)) {
        out.push_back({k, w});
    }
    return out;
}

double expected_cheat(int n, int m, double f, double kappa, const AlphaDistribution& dist, CheatMode mode,
                      double sigmas, NumericMode numeric) {
    check_m(n, m);
    check_probability(kappa, "kappa");
    check_probability(f, "f");
    if (numeric == NumericMode::ExactRational) {
        const exact::Evaluator ev;
        return ev.expected_cheat(n, m, exact::Rational(f), exact::Rational(kappa), dist, mode,
                                 exact::Rational(sigmas))
            .get_d();
    }
    return detail::expected_cheat(kernel_for(n), n, m, dist, correlation(kappa), flipped_correlation(f, kappa), mode,
                                  accept_table(n, kappa, sigmas));
}

}  // namespace qcs::analysis
