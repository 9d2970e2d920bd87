#include <gtest/gtest.h>

#include <array>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "qcs/bellpair.hpp"
#include "qcs/error.hpp"

using namespace qcs;
using namespace qcs::bellpair;

namespace {

constexpr std::array kBases{MeasBasis::Computational, MeasBasis::Diagonal};

double chi_square_critical(double df, double significance) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(df), significance));
}

}  // namespace

TEST(JointDistribution, SameBasisNoisy) {
    const JointDist d = joint_distribution(MeasBasis::Computational, MeasBasis::Computational, NoiseParam(0.05));
    EXPECT_DOUBLE_EQ(d.p00, 0.4875);
    EXPECT_DOUBLE_EQ(d.p11, 0.4875);
    EXPECT_DOUBLE_EQ(d.p01, 0.0125);
    EXPECT_DOUBLE_EQ(d.p10, 0.0125);
}

TEST(JointDistribution, SameBasisNoiseless) {
    const JointDist d = joint_distribution(MeasBasis::Diagonal, MeasBasis::Diagonal, NoiseParam(0.0));
    EXPECT_EQ(d.p00, 0.5);
    EXPECT_EQ(d.p11, 0.5);
    EXPECT_EQ(d.p01, 0.0);
    EXPECT_EQ(d.p10, 0.0);
}

TEST(JointDistribution, CrossBasisIsUniform) {
    for (const double k : {0.0, 0.3, 1.0}) {
        const JointDist d = joint_distribution(MeasBasis::Computational, MeasBasis::Diagonal, NoiseParam(k));
        EXPECT_EQ(d.p00, 0.25);
        EXPECT_EQ(d.p01, 0.25);
        EXPECT_EQ(d.p10, 0.25);
        EXPECT_EQ(d.p11, 0.25);
    }
}

TEST(JointDistribution, NormalizedAndAgreementRate) {
    RandomStream rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const double kappa = rng.uniform();
        for (const auto a : kBases) {
            for (const auto b : kBases) {
                const JointDist d = joint_distribution(a, b, NoiseParam(kappa));
                EXPECT_NEAR(d.total(), 1.0, 1e-12);
                for (const double p : {d.p00, d.p01, d.p10, d.p11}) {
                    EXPECT_GE(p, 0.0);
                    EXPECT_LE(p, 1.0);
                }
                if (a == b) {
                    EXPECT_NEAR(d.agreement(), 1.0 - kappa / 2.0, 1e-15);
                }
            }
        }
    }
}

TEST(NoiseParam, RejectsOutOfRange) {
    EXPECT_THROW(NoiseParam(-0.01), InputError);
    EXPECT_THROW(NoiseParam(1.01), InputError);
    EXPECT_THROW(NoiseParam(std::nan("")), InputError);
    EXPECT_NO_THROW(NoiseParam(1.0));
}

TEST(SamplePair, NoiselessSameBasisAlwaysAgrees) {
    RandomStream rng(9);
    for (int i = 0; i < 100000; ++i) {
        const auto o = sample_pair(MeasBasis::Computational, MeasBasis::Computational, NoiseParam(0.0), rng);
        ASSERT_EQ(o.a, o.b);
    }
}

TEST(SamplePair, Reproducible) {
    RandomStream r1(77);
    RandomStream r2(77);
    for (int i = 0; i < 1000; ++i) {
        const auto x = sample_pair(MeasBasis::Diagonal, MeasBasis::Computational, NoiseParam(0.2), r1);
        const auto y = sample_pair(MeasBasis::Diagonal, MeasBasis::Computational, NoiseParam(0.2), r2);
        ASSERT_EQ(x.a, y.a);
        ASSERT_EQ(x.b, y.b);
    }
}

TEST(SamplePair, AgreementRateWithinFourSigma) {
    constexpr int draws = 1000000;
    RandomStream rng(123);
    int agree = 0;
    for (int i = 0; i < draws; ++i) {
        const auto o = sample_pair(MeasBasis::Computational, MeasBasis::Computational, NoiseParam(0.05), rng);
        agree += o.a == o.b ? 1 : 0;
    }
    const double p = 0.975;
    const double sd = std::sqrt(draws * p * (1 - p));
    EXPECT_LE(std::abs(agree - draws * p), 4 * sd);
}

TEST(SamplePair, ChiSquareAgainstJointDistribution) {
    constexpr int draws = 1000000;
    const double critical = chi_square_critical(3, 1e-4);
    for (const auto a : kBases) {
        for (const auto b : kBases) {
            for (const double kappa : {0.05, 0.5}) {
                RandomStream rng(derive_seed(99, static_cast<int>(a) * 4 + static_cast<int>(b) * 2 + (kappa > 0.1)));
                std::array<int, 4> counts{};
                for (int i = 0; i < draws; ++i) {
                    const auto o = sample_pair(a, b, NoiseParam(kappa), rng);
                    ++counts[o.a * 2 + o.b];
                }
                const JointDist d = joint_distribution(a, b, NoiseParam(kappa));
                const std::array expected{d.p00, d.p01, d.p10, d.p11};
                double chi2 = 0.0;
                for (int c = 0; c < 4; ++c) {
                    const double e = expected[c] * draws;
                    chi2 += (counts[c] - e) * (counts[c] - e) / e;
                }
                EXPECT_LT(chi2, critical) << "kappa=" << kappa;
            }
        }
    }
}

TEST(SamplePartner, ConditionalMatchesJoint) {
    // Drawing the first half uniformly and the second conditionally must give
    // the same joint statistics as sample_pair.
    constexpr int draws = 1000000;
    const double critical = chi_square_critical(3, 1e-4);
    RandomStream rng(4);
    for (const auto b : kBases) {
        std::array<int, 4> counts{};
        for (int i = 0; i < draws; ++i) {
            const std::uint8_t first = rng.bit();
            const std::uint8_t second = sample_partner(first, MeasBasis::Computational, b, NoiseParam(0.1), rng);
            ++counts[first * 2 + second];
        }
        const JointDist d = joint_distribution(MeasBasis::Computational, b, NoiseParam(0.1));
        const std::array expected{d.p00, d.p01, d.p10, d.p11};
        double chi2 = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double e = expected[c] * draws;
            chi2 += (counts[c] - e) * (counts[c] - e) / e;
        }
        EXPECT_LT(chi2, critical);
    }
}

TEST(Basis, FromHonestBit) {
    EXPECT_EQ(basis_for_bit(0), MeasBasis::Computational);
    EXPECT_EQ(basis_for_bit(1), MeasBasis::Diagonal);
    EXPECT_NE(MeasBasis::Computational, MeasBasis::Diagonal);
}
