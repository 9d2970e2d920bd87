#pragma once

#include <gmpxx.h>

#include "qcs/analysis.hpp"

// Exact rational evaluation of the analytic probabilities. Same formulas as
// the floating-point path, intended as a test oracle for small N.
namespace qcs::analysis::exact {

using Rational = mpq_class;
using RationalCorrelation = BasicCorrelation<Rational>;

inline constexpr int kDefaultMaxN = 64;

// Smallest integer count v in [0, m_r] with v >= mu - sigmas * sigma, decided
// without rounding.
int acceptance_threshold(int m_r, const Rational& kappa, const Rational& sigmas);

RationalCorrelation correlation(const Rational& kappa);
RationalCorrelation flipped_correlation(const Rational& f, const Rational& kappa);

class Evaluator {
  public:
    explicit Evaluator(int max_n = kDefaultMaxN);

    int max_n() const { return max_n_; }

    Rational q_ell(int n, int m, int ell, Role role) const;
    Rational p_bind_noiseless_given_ell(int n, double alpha, int ell) const;
    Rational p_bind_noiseless(int n, int m, double alpha, Role role) const;
    Rational p_cheat_noiseless(int n, int m, double alpha) const;
    Rational p_bth(int n, double alpha, const Rational& kappa) const;
    Rational p_bta(int n, int m, double alpha, const RationalCorrelation& corr, Role role) const;
    Rational p_pass_bound(int n, int m, const Rational& kappa, const RationalCorrelation& corr,
                          PassDirection direction, Stagger stagger = Stagger::AliceFirst,
                          const Rational& sigmas = 3) const;
    Rational p_cheat(int n, int m, double alpha, const Rational& kappa, const Rational& f, CheatMode mode,
                     const Rational& sigmas = 3) const;
    // Weights are computed exactly from the binary values of dist.lo and
    // dist.hi.
    Rational expected_cheat(int n, int m, const Rational& f, const Rational& kappa, const AlphaDistribution& dist,
                            CheatMode mode, const Rational& sigmas = 3) const;

  private:
    void check(int n) const;

    int max_n_;
};

}  // namespace qcs::analysis::exact
