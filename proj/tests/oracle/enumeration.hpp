#pragma once

// Brute-force reference for the analytic probabilities at tiny N. Everything
// here is enumerated: index-set placements and Trent's T1/T2 splits, every
// pattern of correct/incorrect check results, every guess string. No closed
// forms are shared with the library.

#include <gmpxx.h>

#include <array>
#include <map>

#include "qcs/analysis.hpp"

namespace qcs::oracle {

using Rational = mpq_class;

// Smallest v in [0, m_r] with v >= mu - sigmas*sigma, mu = m_r(1 - kappa/2),
// sigma^2 = m_r(1 - kappa/2)(kappa/2).
int acceptance(int m_r, const Rational& kappa, int sigmas = 3);

// Distribution of which N pair-halves of one side Trent reserves for one
// client, obtained by enumerating the other client's 2N-index set and the
// N/N split of the rest. Keys are bit masks over the 4N rounds.
const std::map<unsigned, Rational>& reserved_subset_distribution(int n);

// Distribution of the other client's 2N-index set (uniform by construction).
const std::map<unsigned, Rational>& shared_subset_distribution(int n);

Rational q_ell(int n, int received, int ell);
Rational bind_noiseless_given_ell(int n, int k, int ell);
Rational bind_noiseless(int n, int received, int k);
Rational bth(int n, int k, const Rational& p_eq);
Rational bta(int n, int received, int k, const Rational& p_eq);
Rational pass_bound(int n, int received, const Rational& p_eq, const Rational& kappa);
// Product of the enumerated factors, in the same stagger conventions as the
// analytic modes.
Rational cheat(int n, int m, int k, const Rational& kappa, const Rational& f, analysis::CheatMode mode);

// (shared-with-client, reserved-for-Alice, reserved-for-Bob) counts among one
// side's halves with index >= m.
using SideCounts = std::array<int, 3>;
std::map<SideCounts, Rational> side_configuration_distribution(int n, int m);

}  // namespace qcs::oracle
