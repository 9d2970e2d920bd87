#include "qcs/analysis/exact.hpp"

#include <string>

#include "formulas.hpp"
#include "kernels.hpp"
#include "qcs/error.hpp"

namespace qcs::analysis {

namespace detail {

int RationalKernel::acceptance(int m_r, const Real& kappa, const Real& sigmas) {
    if (m_r < 0) {
        throw InputError("acceptance_threshold: negative count");
    }
    const Real p_eq = 1 - kappa / 2;
    const Real mu = m_r * p_eq;
    const Real s2_var = sigmas * sigmas * m_r * p_eq * (kappa / 2);
    // v >= mu - s sigma  <=>  v >= mu, or (mu - v)^2 <= s^2 sigma^2.
    for (int v = 0; v < m_r; ++v) {
        const Real gap = mu - v;
        if (gap <= 0 || gap * gap <= s2_var) {
            return v;
        }
    }
    return m_r;
}

}  // namespace detail

namespace exact {

namespace {

using detail::RationalKernel;

void check_probability(const Rational& p, const char* what) {
    if (p < 0 || p > 1) {
        throw InputError(std::string(what) + " must lie in [0, 1]");
    }
}

void check_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw InputError("alpha must lie in (1/2, 1)");
    }
}

}  // namespace

int acceptance_threshold(int m_r, const Rational& kappa, const Rational& sigmas) {
    return RationalKernel::acceptance(m_r, kappa, sigmas);
}

RationalCorrelation correlation(const Rational& kappa) {
    check_probability(kappa, "kappa");
    return {1 - kappa / 2, kappa / 2};
}

RationalCorrelation flipped_correlation(const Rational& f, const Rational& kappa) {
    check_probability(f, "f");
    const RationalCorrelation c = correlation(kappa);
    return {(1 - f) * c.p_eq + f * c.p_neq, (1 - f) * c.p_neq + f * c.p_eq};
}

Evaluator::Evaluator(int max_n) : max_n_(max_n) {
    if (max_n < 1) {
        throw InputError("exact evaluator cap must be positive");
    }
}

void Evaluator::check(int n) const {
    if (n < 1 || n > max_n_) {
        throw InputError("exact evaluation supports 1 <= N <= " + std::to_string(max_n_) + ", got " +
                         std::to_string(n));
    }
}

Rational Evaluator::q_ell(int n, int m, int ell, Role role) const {
    check(n);
    if (m < 0 || m > 4 * n || ell < 0 || ell > n) {
        throw InputError("q_ell: arguments out of range");
    }
    return detail::q_ell(RationalKernel{}, n, received_count(m, role), ell);
}

Rational Evaluator::p_bind_noiseless_given_ell(int n, double alpha, int ell) const {
    check(n);
    check_alpha(alpha);
    if (ell < 0 || ell > n) {
        throw InputError("ell outside [0, N]");
    }
    return detail::bind_noiseless_given_ell(RationalKernel{}, n, threshold_count(alpha, n), ell);
}

Rational Evaluator::p_bind_noiseless(int n, int m, double alpha, Role role) const {
    check(n);
    check_alpha(alpha);
    if (m < 0 || m > 4 * n) {
        throw InputError("step out of range");
    }
    return detail::bind_noiseless(RationalKernel{}, n, received_count(m, role), threshold_count(alpha, n));
}

Rational Evaluator::p_cheat_noiseless(int n, int m, double alpha) const {
    return p_cheat(n, m, alpha, 0, 0, CheatMode::HonestNoiseless);
}

Rational Evaluator::p_bth(int n, double alpha, const Rational& kappa) const {
    check(n);
    check_alpha(alpha);
    return detail::bth(RationalKernel{}, n, threshold_count(alpha, n), correlation(kappa));
}

Rational Evaluator::p_bta(int n, int m, double alpha, const RationalCorrelation& corr, Role role) const {
    check(n);
    check_alpha(alpha);
    if (m < 0 || m > 4 * n) {
        throw InputError("step out of range");
    }
    return detail::bta(RationalKernel{}, n, received_count(m, role), threshold_count(alpha, n), corr);
}

Rational Evaluator::p_pass_bound(int n, int m, const Rational& kappa, const RationalCorrelation& corr,
                                 PassDirection direction, Stagger stagger, const Rational& sigmas) const {
    check(n);
    if (m < 0 || m > 4 * n) {
        throw InputError("step out of range");
    }
    const Role role = direction == PassDirection::AlicesTestOfBob && stagger == Stagger::AliceFirst
                          ? Role::AliceView
                          : Role::BobView;
    return detail::pass_bound(RationalKernel{}, n, received_count(m, role), corr,
                              detail::acceptance_table<RationalKernel>(n, kappa, sigmas));
}

Rational Evaluator::p_cheat(int n, int m, double alpha, const Rational& kappa, const Rational& f, CheatMode mode,
                            const Rational& sigmas) const {
    check(n);
    check_alpha(alpha);
    if (m < 0 || m > 4 * n) {
        throw InputError("step out of range");
    }
    return detail::cheat(RationalKernel{}, n, m, threshold_count(alpha, n), correlation(kappa),
                         flipped_correlation(f, kappa), mode,
                         detail::acceptance_table<RationalKernel>(n, kappa, sigmas));
}

Rational Evaluator::expected_cheat(int n, int m, const Rational& f, const Rational& kappa,
                                   const AlphaDistribution& dist, CheatMode mode, const Rational& sigmas) const {
    check(n);
    if (m < 0 || m > 4 * n) {
        throw InputError("step out of range");
    }
    return detail::expected_cheat(RationalKernel{}, n, m, dist, correlation(kappa), flipped_correlation(f, kappa),
                                  mode, detail::acceptance_table<RationalKernel>(n, kappa, sigmas));
}

}  // namespace exact

}  // namespace qcs::analysis
