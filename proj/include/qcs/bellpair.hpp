#pragma once

#include <cstdint>

#include "qcs/random.hpp"

// Single-shot projective measurements on maximally entangled pairs sent
// through a depolarizing channel. Every pair is measured exactly once per
// half, in one of two mutually unbiased bases, so a pair is fully described by
// the joint distribution of its two outcomes; no state vectors are kept.
namespace qcs::bellpair {

enum class MeasBasis : std::uint8_t { Computational, Diagonal };

// Honest observable for a bit of H = h(M) xor k: 0 selects the computational
// basis, 1 the diagonal one.
constexpr MeasBasis basis_for_bit(std::uint8_t h_bit) {
    return h_bit == 0 ? MeasBasis::Computational : MeasBasis::Diagonal;
}

// Depolarizing weight kappa in [0, 1].
class NoiseParam {
  public:
    constexpr NoiseParam() = default;
    explicit NoiseParam(double kappa);

    constexpr double kappa() const { return kappa_; }

  private:
    double kappa_ = 0.0;
};

struct JointDist {
    double p00 = 0.0;
    double p01 = 0.0;
    double p10 = 0.0;
    double p11 = 0.0;

    double at(std::uint8_t a, std::uint8_t b) const;
    // P_= = p00 + p11.
    double agreement() const { return p00 + p11; }
    double total() const { return p00 + p01 + p10 + p11; }
};

// Same basis: correlated |phi+> statistics, p00 = p11 = (2 - kappa)/4 and
// p01 = p10 = kappa/4. Different bases: uniform 1/4 for every kappa.
JointDist joint_distribution(MeasBasis basis_a, MeasBasis basis_b, NoiseParam noise);

struct OutcomePair {
    std::uint8_t a = 0;
    std::uint8_t b = 0;
};

// One draw from joint_distribution.
OutcomePair sample_pair(MeasBasis basis_a, MeasBasis basis_b, NoiseParam noise, RandomStream& rng);

// Outcome of the second half of a pair whose first half was already measured
// with result first_outcome, drawn from the conditional of joint_distribution.
// Measurements are local, so sampling the halves at different times gives the
// same statistics as sample_pair.
std::uint8_t sample_partner(std::uint8_t first_outcome, MeasBasis first_basis, MeasBasis second_basis,
                            NoiseParam noise, RandomStream& rng);

}  // namespace qcs::bellpair
