#include <gtest/gtest.h>

#include "enumeration.hpp"
#include "qcs/analysis.hpp"
#include "qcs/analysis/exact.hpp"
#include "qcs/rules.hpp"

using namespace qcs;
using namespace qcs::analysis;
using oracle::Rational;

namespace {

Rational sum_values(const std::map<unsigned, Rational>& dist) {
    Rational s = 0;
    for (const auto& [mask, w] : dist) {
        s += w;
    }
    return s;
}

}  // namespace

TEST(Oracle, PlacementsAreDistributions) {
    for (int n = 1; n <= 3; ++n) {
        EXPECT_EQ(sum_values(oracle::reserved_subset_distribution(n)), 1);
        EXPECT_EQ(sum_values(oracle::shared_subset_distribution(n)), 1);
        // Every N-subset of the 4N rounds is equally likely to be reserved.
        const auto& reserved = oracle::reserved_subset_distribution(n);
        const Rational first = reserved.begin()->second;
        for (const auto& [mask, w] : reserved) {
            EXPECT_EQ(w, first);
        }
    }
}

TEST(Oracle, AcceptanceMatchesLibrary) {
    for (int m_r = 0; m_r <= 200; ++m_r) {
        for (const auto& [kq, kd] : {std::pair{Rational(0), 0.0}, std::pair{Rational(1, 20), 0.05},
                                     std::pair{Rational(1, 10), 0.1}, std::pair{Rational(1, 2), 0.5}}) {
            ASSERT_EQ(oracle::acceptance(m_r, kq), acceptance_threshold(m_r, kd, 3.0)) << m_r << " " << kd;
            ASSERT_EQ(oracle::acceptance(m_r, kq), exact::acceptance_threshold(m_r, kq, 3)) << m_r;
        }
    }
}

TEST(Oracle, QEllTwoThree) {
    const exact::Evaluator ev;
    Rational total = 0;
    for (int ell = 0; ell <= 2; ++ell) {
        const Rational expected = oracle::q_ell(2, 3, ell);
        EXPECT_EQ(ev.q_ell(2, 3, ell, Role::BobView), expected);
        EXPECT_NEAR(q_ell(2, 3, ell, Role::BobView), expected.get_d(), 1e-13);
        total += expected;
    }
    EXPECT_EQ(total, 1);
}

TEST(Oracle, BindGivenEllByGuessStrings) {
    EXPECT_EQ(oracle::bind_noiseless_given_ell(4, 3, 4), Rational(5, 16));
    const exact::Evaluator ev;
    for (int n = 1; n <= 6; ++n) {
        for (double alpha : {0.6, 0.75, 0.9}) {
            for (int ell = 0; ell <= n; ++ell) {
                EXPECT_EQ(ev.p_bind_noiseless_given_ell(n, alpha, ell),
                          oracle::bind_noiseless_given_ell(n, threshold_count(alpha, n), ell));
            }
        }
    }
}

TEST(Oracle, BindTwoFour) {
    const exact::Evaluator ev;
    const Rational expected = oracle::bind_noiseless(2, 4, threshold_count(0.8, 2));
    EXPECT_EQ(ev.p_bind_noiseless(2, 4, 0.8, Role::BobView), expected);
    EXPECT_NEAR(p_bind_noiseless(2, 4, 0.8, Role::BobView), expected.get_d(), 1e-13);
}

TEST(Oracle, CheatNoiselessAtTheEnd) {
    const exact::Evaluator ev;
    for (double alpha : {0.6, 0.75, 0.9}) {
        const Rational expected =
            oracle::cheat(1, 4, threshold_count(alpha, 1), 0, 0, CheatMode::HonestNoiseless);
        EXPECT_EQ(ev.p_cheat_noiseless(1, 4, alpha), expected);
        EXPECT_NEAR(p_cheat_noiseless(1, 4, alpha), expected.get_d(), 1e-13);
    }
}

TEST(Oracle, BtaThreeSix) {
    const exact::Evaluator ev;
    const Rational kappa(1, 10);
    const auto corr = exact::correlation(kappa);
    const Rational expected = oracle::bta(3, 6, threshold_count(0.8, 3), corr.p_eq);
    EXPECT_EQ(ev.p_bta(3, 6, 0.8, corr, Role::BobView), expected);
    EXPECT_NEAR(p_bta(3, 6, 0.8, correlation(0.1), Role::BobView), expected.get_d(), 1e-13);
}

TEST(Oracle, ConfigurationMarginalsMatchQEll) {
    // The reserved-for-Bob count among late halves is what q_ell describes.
    for (int n = 1; n <= 3; ++n) {
        for (int m = 0; m <= 4 * n; ++m) {
            std::vector<Rational> marginal(static_cast<std::size_t>(n) + 1);
            for (const auto& [c, w] : oracle::side_configuration_distribution(n, m)) {
                ASSERT_EQ(c[0] + c[1] + c[2], 4 * n - m);
                ASSERT_LE(c[0], 2 * n);
                ASSERT_LE(c[1], n);
                ASSERT_LE(c[2], n);
                marginal[static_cast<std::size_t>(c[2])] += w;
            }
            for (int ell = 0; ell <= n; ++ell) {
                EXPECT_EQ(marginal[static_cast<std::size_t>(ell)], oracle::q_ell(n, m, ell));
            }
        }
    }
}
