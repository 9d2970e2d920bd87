#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "qcs/analysis.hpp"
#include "qcs/analysis/exact.hpp"
#include "qcs/error.hpp"

using namespace qcs;
using namespace qcs::analysis;
using exact::Rational;

namespace {

const std::vector<double> kAlphas{0.6, 0.75, 0.9};

// Binomial coefficient by the multiplicative formula, in exact arithmetic.
Rational choose(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    Rational out = 1;
    for (int i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

Rational power(const Rational& x, int e) {
    Rational out = 1;
    for (int i = 0; i < e; ++i) {
        out *= x;
    }
    return out;
}

}  // namespace

TEST(QEll, Endpoints) {
    for (int n = 1; n <= 12; ++n) {
        EXPECT_DOUBLE_EQ(q_ell(n, 0, n, Role::BobView), 1.0);
        EXPECT_DOUBLE_EQ(q_ell(n, 4 * n, 0, Role::BobView), 1.0);
        // Alice holds nothing at m = 1 either.
        EXPECT_DOUBLE_EQ(q_ell(n, 1, n, Role::AliceView), 1.0);
    }
}

TEST(QEll, NormalizedInFloat) {
    for (int n = 1; n <= 40; ++n) {
        for (int m = 0; m <= 4 * n; ++m) {
            for (Role role : {Role::BobView, Role::AliceView}) {
                double s = 0.0;
                for (int ell = 0; ell <= n; ++ell) {
                    s += q_ell(n, m, ell, role);
                }
                ASSERT_NEAR(s, 1.0, 1e-10) << n << " " << m;
            }
        }
    }
}

TEST(QEll, NormalizedExactly) {
    const exact::Evaluator ev;
    for (int n = 1; n <= 16; ++n) {
        for (int m = 0; m <= 4 * n; ++m) {
            Rational s = 0;
            for (int ell = 0; ell <= n; ++ell) {
                s += ev.q_ell(n, m, ell, Role::BobView);
            }
            ASSERT_EQ(s, 1) << n << " " << m;
        }
    }
}

TEST(QEll, AliceUsesOneFewer) {
    for (int m = 1; m <= 20; ++m) {
        for (int ell = 0; ell <= 5; ++ell) {
            EXPECT_DOUBLE_EQ(q_ell(5, m, ell, Role::AliceView), q_ell(5, m - 1, ell, Role::BobView));
        }
    }
}

TEST(QEll, RejectsOutOfRange) {
    EXPECT_THROW(q_ell(2, 9, 0, Role::BobView), InputError);
    EXPECT_THROW(q_ell(2, -1, 0, Role::BobView), InputError);
    EXPECT_THROW(q_ell(2, 3, 3, Role::BobView), InputError);
    EXPECT_THROW(q_ell(0, 0, 0, Role::BobView), InputError);
}

TEST(BindNoiseless, GivenEll) {
    EXPECT_DOUBLE_EQ(p_bind_noiseless_given_ell(4, 0.9, 0), 1.0);
    EXPECT_DOUBLE_EQ(p_bind_noiseless_given_ell(4, 0.9, 4), 5.0 / 16.0);
    const exact::Evaluator ev;
    EXPECT_EQ(ev.p_bind_noiseless_given_ell(4, 0.9, 4), Rational(5, 16));
    // alpha < 1 never demands all N; just below 1 it demands N - 1.
    for (int n : {5, 10, 50}) {
        const double expected = std::ldexp(1.0, -n) * (n + 1);
        EXPECT_NEAR(p_bind_noiseless_given_ell(n, 0.999, n), expected, 1e-12 * expected);
        EXPECT_EQ(ev.p_bind_noiseless_given_ell(n, 0.999, n), Rational(n + 1) / power(2, n));
    }
}

TEST(BindNoiseless, Endpoints) {
    for (int n = 1; n <= 10; ++n) {
        for (double alpha : kAlphas) {
            EXPECT_DOUBLE_EQ(p_bind_noiseless(n, 4 * n, alpha, Role::BobView), 1.0);
        }
    }
    // m = 0 leaves every result to be guessed.
    const exact::Evaluator ev;
    for (int n = 1; n <= 10; ++n) {
        const int k = threshold_count(0.9, n);
        Rational expected = 0;
        for (int u = k; u <= n; ++u) {
            expected += choose(n, u);
        }
        expected /= power(2, n);
        EXPECT_EQ(ev.p_bind_noiseless(n, 0, 0.9, Role::BobView), expected);
    }
}

TEST(BindNoiseless, Monotone) {
    for (int n = 1; n <= 20; ++n) {
        for (double alpha : kAlphas) {
            double prev = -1.0;
            for (int m = 0; m <= 4 * n; ++m) {
                const double v = p_bind_noiseless(n, m, alpha, Role::BobView);
                ASSERT_GE(v, prev - 1e-13) << n << " " << m;
                prev = v;
            }
        }
        for (int m = 0; m <= 4 * n; m += 3) {
            double prev = 2.0;
            for (double alpha = 0.55; alpha < 0.99; alpha += 0.02) {
                const double v = p_bind_noiseless(n, m, alpha, Role::BobView);
                ASSERT_LE(v, prev + 1e-13) << n << " " << m << " " << alpha;
                prev = v;
            }
        }
    }
}

TEST(CheatNoiseless, SmallMIsBoundedByBob) {
    for (int n = 1; n <= 12; ++n) {
        const double alpha = 0.9999;
        EXPECT_LE(p_cheat_noiseless(n, 0, alpha), p_bind_noiseless(n, 0, alpha, Role::BobView) + 1e-15);
    }
}

TEST(Correlation, MeanVar) {
    const MeanVar mv = mean_var(100, 0.05);
    EXPECT_DOUBLE_EQ(mv.mu, 97.5);
    EXPECT_NEAR(mv.variance, 2.4375, 1e-12);
    EXPECT_NEAR(mv.sigma * mv.sigma, 2.4375, 1e-12);
    const MeanVar clean = mean_var(40, 0.0);
    EXPECT_EQ(clean.sigma, 0.0);
    EXPECT_EQ(clean.mu, 40.0);
    const MeanVar coin = mean_var(40, 1.0);
    EXPECT_DOUBLE_EQ(coin.mu, 20.0);
    EXPECT_DOUBLE_EQ(coin.variance, 10.0);
}

TEST(Correlation, Flipped) {
    for (double kappa : {0.0, 0.05, 0.3, 1.0}) {
        const CorrelationPair honest = correlation(kappa);
        EXPECT_DOUBLE_EQ(honest.p_eq + honest.p_neq, 1.0);
        EXPECT_DOUBLE_EQ(honest.p_eq, 1.0 - kappa / 2.0);
        EXPECT_DOUBLE_EQ(flipped_correlation(0.0, kappa).p_eq, honest.p_eq);
        EXPECT_DOUBLE_EQ(flipped_correlation(0.5, kappa).p_eq, 0.5);
        EXPECT_DOUBLE_EQ(flipped_correlation(1.0, kappa).p_eq, kappa / 2.0);
    }
    EXPECT_THROW(flipped_correlation(1.5, 0.1), InputError);
}

TEST(Bth, Examples) {
    for (double alpha : kAlphas) {
        EXPECT_DOUBLE_EQ(p_bth(20, alpha, 0.0), 1.0);
    }
    EXPECT_DOUBLE_EQ(p_bth(1, 0.6, 0.4), 1.0);

    // Direct summation of the upper tail of Bin(20, 0.975) from 18.
    const Rational p(39, 40);
    Rational tail = 0;
    for (int s = 18; s <= 20; ++s) {
        tail += choose(20, s) * power(p, s) * power(1 - p, 20 - s);
    }
    const exact::Evaluator ev;
    EXPECT_EQ(ev.p_bth(20, 0.9, Rational(1, 20)), tail);
    EXPECT_NEAR(p_bth(20, 0.9, 0.05), tail.get_d(), 1e-14);
}

TEST(Bta, FullInformationAndNoiselessReduction) {
    for (double alpha : kAlphas) {
        EXPECT_NEAR(p_bta(10, 40, alpha, correlation(0.0), Role::BobView), 1.0, 1e-15);
    }
    const exact::Evaluator ev;
    const auto clean = exact::correlation(0);
    for (int n = 1; n <= 8; ++n) {
        for (int m = 0; m <= 4 * n; ++m) {
            for (double alpha : kAlphas) {
                for (Role role : {Role::BobView, Role::AliceView}) {
                    ASSERT_EQ(ev.p_bta(n, m, alpha, clean, role), ev.p_bind_noiseless(n, m, alpha, role))
                        << n << " " << m << " " << alpha;
                }
            }
        }
    }
}

TEST(PassBound, Examples) {
    for (int m = 0; m <= 40; ++m) {
        EXPECT_NEAR(p_pass_bound(10, m, 0.0, correlation(0.0), PassDirection::BobsTestOfAlice), 1.0, 1e-13);
    }
    const double adversary = p_pass_bound(50, 100, 0.05, flipped_correlation(1.0, 0.05),
                                          PassDirection::AlicesTestOfBob, Stagger::Symmetric);
    EXPECT_LT(adversary, 1e-6);

    for (int m : {10, 25, 60, 100}) {
        double prev = 2.0;
        for (double f = 0.0; f <= 1.0 + 1e-12; f += 0.05) {
            const double v = p_pass_bound(25, m, 0.05, flipped_correlation(std::min(f, 1.0), 0.05),
                                          PassDirection::AlicesTestOfBob);
            ASSERT_LE(v, prev + 1e-14) << m << " " << f;
            prev = v;
        }
    }
}

TEST(PassBound, StaggerPicksReceivedCount) {
    const auto corr = correlation(0.1);
    EXPECT_DOUBLE_EQ(p_pass_bound(6, 9, 0.1, corr, PassDirection::AlicesTestOfBob, Stagger::AliceFirst),
                     p_pass_bound(6, 8, 0.1, corr, PassDirection::BobsTestOfAlice));
    EXPECT_DOUBLE_EQ(p_pass_bound(6, 9, 0.1, corr, PassDirection::AlicesTestOfBob, Stagger::Symmetric),
                     p_pass_bound(6, 9, 0.1, corr, PassDirection::BobsTestOfAlice));
}

TEST(Cheat, ModeReductions) {
    const int n = 12;
    for (int m = 0; m <= 4 * n; ++m) {
        for (double alpha : kAlphas) {
            // Clean channel: the noisy model collapses to the noiseless one.
            EXPECT_NEAR(p_cheat(n, m, alpha, 0.0, 0.0, CheatMode::HonestNoisy),
                        p_cheat(n, m, alpha, 0.0, 0.0, CheatMode::HonestNoiseless), 1e-13);

            // f = 0: honest statistics under the symmetric stagger.
            const double kappa = 0.1;
            const auto honest = correlation(kappa);
            const double own = p_bth(n, alpha, kappa);
            const double built =
                p_pass_bound(n, m, kappa, honest, PassDirection::BobsTestOfAlice) *
                p_pass_bound(n, m, kappa, honest, PassDirection::AlicesTestOfBob, Stagger::Symmetric) * own *
                p_bta(n, m, alpha, honest, Role::BobView) * (1.0 - own * p_bta(n, m, alpha, honest, Role::BobView));
            EXPECT_NEAR(p_cheat(n, m, alpha, kappa, 0.0, CheatMode::DishonestNoisy), built, 1e-13);
        }
    }
}

TEST(Cheat, BoundOrdering) {
    for (int n : {3, 10, 30}) {
        for (int m = 0; m <= 4 * n; ++m) {
            for (double alpha : kAlphas) {
                for (double kappa : {0.0, 0.05, 0.3}) {
                    for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy,
                                           CheatMode::DishonestNoisy}) {
                        const double v = p_cheat(n, m, alpha, kappa, 0.2, mode);
                        ASSERT_GE(v, 0.0);
                        ASSERT_LE(v, 1.0);
                    }
                    const auto honest = correlation(kappa);
                    const double reach = p_pass_bound(n, m, kappa, honest, PassDirection::BobsTestOfAlice) *
                                         p_pass_bound(n, m, kappa, honest, PassDirection::AlicesTestOfBob);
                    ASSERT_LE(p_cheat(n, m, alpha, kappa, 0.0, CheatMode::HonestNoisy), reach + 1e-15);
                }
            }
        }
    }
}

TEST(Cheat, FloatMatchesRational) {
    for (int n : {2, 7, 15}) {
        for (int m = 0; m <= 4 * n; ++m) {
            for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
                const double a = p_cheat(n, m, 0.75, 0.1, 0.3, mode);
                const double b = p_cheat(n, m, 0.75, 0.1, 0.3, mode, 3.0, NumericMode::ExactRational);
                ASSERT_NEAR(a, b, 1e-13) << n << " " << m;
            }
        }
    }
}

TEST(Cheat, ExactCap) {
    const exact::Evaluator ev;
    EXPECT_EQ(ev.max_n(), 64);
    EXPECT_NO_THROW(ev.q_ell(64, 3, 1, Role::BobView));
    EXPECT_THROW(ev.q_ell(65, 3, 1, Role::BobView), InputError);
    EXPECT_THROW(p_cheat(65, 10, 0.9, 0.05, 0.0, CheatMode::HonestNoisy, 3.0, NumericMode::ExactRational),
                 InputError);
    EXPECT_NO_THROW(p_cheat(65, 10, 0.9, 0.05, 0.0, CheatMode::HonestNoisy));
    const exact::Evaluator wide(80);
    EXPECT_NO_THROW(wide.q_ell(80, 3, 1, Role::BobView));
}

TEST(Modes, NamesRoundTrip) {
    for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
        const auto parsed = parse_mode(mode_name(mode));
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, mode);
    }
    EXPECT_FALSE(parse_mode("sneaky").has_value());
}

TEST(ExpectedCheat, WeightsSumToOne) {
    for (int n : {1, 3, 10, 77, 1500}) {
        double s = 0.0;
        for (const auto& w : threshold_weights(n, AlphaDistribution{0.7, 0.99})) {
            EXPECT_GT(w.weight, 0.0);
            s += w.weight;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(ExpectedCheat, DegenerateDistribution) {
    const int n = 10;
    // [0.81, 0.8100001] lies inside the k = 8 cell.
    const AlphaDistribution narrow{0.81, 0.8100001};
    for (int m : {5, 20, 33}) {
        for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
            EXPECT_NEAR(expected_cheat(n, m, 0.2, 0.05, narrow, mode), p_cheat(n, m, 0.81, 0.05, 0.2, mode), 1e-12);
        }
    }
}

TEST(ExpectedCheat, MatchesQuadrature) {
    // The integrand is a step function of alpha; integrate each step with an
    // adaptive Gauss-Kronrod rule and compare.
    using boost::math::quadrature::gauss_kronrod;
    const int n = 10;
    const AlphaDistribution dist{0.7, 0.99};
    for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
        for (int m : {1, 8, 17, 25, 40}) {
            std::vector<double> cuts{dist.lo};
            for (int k = 1; k < n; ++k) {
                const double c = static_cast<double>(k) / n;
                if (c > dist.lo && c < dist.hi) {
                    cuts.push_back(c);
                }
            }
            cuts.push_back(dist.hi);
            double integral = 0.0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
                const double half = 0.5 * (cuts[i + 1] - cuts[i]);
                // Stay strictly inside the cell so the floor is unambiguous.
                auto f = [&](double x) { return p_cheat(n, m, mid + x * half * (1 - 1e-9), 0.05, 0.2, mode); };
                integral += half * gauss_kronrod<double, 61>::integrate(f, -1.0, 1.0, 5, 1e-14);
            }
            integral /= dist.hi - dist.lo;
            EXPECT_NEAR(expected_cheat(n, m, 0.2, 0.05, dist, mode), integral, 1e-10) << m;
        }
    }
}

TEST(ExpectedCheat, MeanValueBound) {
    const int n = 20;
    const AlphaDistribution dist{0.72, 0.97};
    for (int m = 0; m <= 4 * n; m += 5) {
        double lo = 1.0;
        double hi = 0.0;
        for (double alpha = dist.lo; alpha <= dist.hi; alpha += 0.0025) {
            const double v = p_cheat(n, m, alpha, 0.05, 0.1, CheatMode::DishonestNoisy);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double e = expected_cheat(n, m, 0.1, 0.05, dist, CheatMode::DishonestNoisy);
        EXPECT_GE(e, lo - 1e-15);
        EXPECT_LE(e, hi + 1e-15);
    }
}

TEST(ExpectedCheat, RationalAgrees) {
    const exact::Evaluator ev;
    const AlphaDistribution dist{0.7, 0.99};
    for (int m = 0; m <= 24; ++m) {
        const Rational e = ev.expected_cheat(6, m, Rational(1, 5), Rational(1, 20), dist, CheatMode::DishonestNoisy);
        EXPECT_NEAR(e.get_d(), expected_cheat(6, m, 0.2, 0.05, dist, CheatMode::DishonestNoisy), 1e-14);
    }
}

TEST(Search, CurveMatchesPointwiseEvaluation) {
    const AlphaDistribution dist{0.7, 0.99};
    for (int n : {5, 25, 60}) {
        for (CheatMode mode : {CheatMode::HonestNoiseless, CheatMode::HonestNoisy, CheatMode::DishonestNoisy}) {
            const auto curve = expected_cheat_curve(n, 0.05, dist, mode, 0.13);
            ASSERT_EQ(curve.size(), static_cast<std::size_t>(4 * n));
            for (const CurvePoint& pt : curve) {
                const double ref = expected_cheat(n, pt.m, 0.13, 0.05, dist, mode);
                ASSERT_NEAR(pt.value, ref, 1e-12 + 1e-9 * ref) << n << " " << pt.m;
            }
        }
    }
}

TEST(Search, HonestMaximumIsExhaustive) {
    const AlphaDistribution dist{0.9, 0.99};
    for (int n : {3, 10, 25}) {
        const CheatAssessment a = max_cheat_search(n, 0.05, dist, CheatMode::HonestNoiseless);
        int best_m = 0;
        double best = -1.0;
        for (int m = 1; m <= 4 * n; ++m) {
            const double v = expected_cheat(n, m, 0.0, 0.05, dist, CheatMode::HonestNoiseless);
            if (v > best) {
                best = v;
                best_m = m;
            }
        }
        EXPECT_EQ(a.best_m, best_m);
        EXPECT_NEAR(a.value, best, 1e-12);
        EXPECT_EQ(a.best_f, 0.0);
        EXPECT_EQ(a.four_n, 4 * n);
    }
}

TEST(Search, RefinementNeverLosesToTheGrid) {
    const AlphaDistribution dist{0.7, 0.99};
    const int n = 30;
    SearchOptions opts;
    const CheatAssessment a = max_cheat_search(n, 0.05, dist, CheatMode::DishonestNoisy, opts);
    double grid_best = 0.0;
    for (int i = 0; i * opts.f_step <= 1.0 + 1e-12; ++i) {
        for (const CurvePoint& pt : expected_cheat_curve(n, 0.05, dist, CheatMode::DishonestNoisy, i * opts.f_step)) {
            grid_best = std::max(grid_best, pt.value);
        }
    }
    EXPECT_GE(a.value, grid_best - 1e-15);
    double curve_max = 0.0;
    for (const CurvePoint& pt : a.curve) {
        curve_max = std::max(curve_max, pt.value);
    }
    EXPECT_EQ(a.value, curve_max);
    EXPECT_GE(a.best_f, 0.0);
    EXPECT_LE(a.best_f, 1.0);
}

TEST(Search, ThreadCountDoesNotChangeResult) {
    const AlphaDistribution dist{0.7, 0.99};
    SearchOptions one;
    SearchOptions four;
    four.threads = 4;
    const auto a = max_cheat_search(40, 0.05, dist, CheatMode::DishonestNoisy, one);
    const auto b = max_cheat_search(40, 0.05, dist, CheatMode::DishonestNoisy, four);
    EXPECT_EQ(a.best_m, b.best_m);
    EXPECT_EQ(a.best_f, b.best_f);
    EXPECT_EQ(a.value, b.value);
}

TEST(Scaling, SyntheticSeries) {
    std::vector<std::pair<double, double>> pts;
    for (double n : {50.0, 100.0, 200.0, 400.0, 600.0}) {
        pts.emplace_back(n, 3.0 / std::sqrt(n));
    }
    const ScalingFit fit = scaling_slope(pts);
    EXPECT_NEAR(fit.slope, -0.5, 1e-9);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);

    const ScalingFit flat = scaling_slope({{10, 0.2}, {20, 0.2}, {40, 0.2}});
    EXPECT_NEAR(flat.slope, 0.0, 1e-15);
}

TEST(Scaling, RejectsBadInput) {
    EXPECT_THROW(scaling_slope({{10, 0.1}, {20, 0.05}}), InputError);
    EXPECT_THROW(scaling_slope({{10, 0.1}, {20, 0.0}, {30, 0.02}}), InputError);
    EXPECT_THROW(scaling_slope({{10, 0.1}, {10, 0.2}, {10, 0.3}}), NumericError);
}
