#include "qcs/bellpair.hpp"

#include <string>

#include "qcs/error.hpp"

namespace qcs::bellpair {

NoiseParam::NoiseParam(double kappa) : kappa_(kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw InputError("noise parameter kappa must lie in [0, 1], got " + std::to_string(kappa));
    }
}

double JointDist::at(std::uint8_t a, std::uint8_t b) const {
    if (a == 0) {
        return b == 0 ? p00 : p01;
    }
    return b == 0 ? p10 : p11;
}

JointDist joint_distribution(MeasBasis basis_a, MeasBasis basis_b, NoiseParam noise) {
    if (basis_a != basis_b) {
        return {0.25, 0.25, 0.25, 0.25};
    }
    const double kappa = noise.kappa();
    const double same = (2.0 - kappa) / 4.0;
    const double differ = kappa / 4.0;
    return {same, differ, differ, same};
}

OutcomePair sample_pair(MeasBasis basis_a, MeasBasis basis_b, NoiseParam noise, RandomStream& rng) {
    const JointDist d = joint_distribution(basis_a, basis_b, noise);
    const double u = rng.uniform();
    if (u < d.p00) {
        return {0, 0};
    }
    if (u < d.p00 + d.p01) {
        return {0, 1};
    }
    if (u < d.p00 + d.p01 + d.p10) {
        return {1, 0};
    }
    return {1, 1};
}

std::uint8_t sample_partner(std::uint8_t first_outcome, MeasBasis first_basis, MeasBasis second_basis,
                            NoiseParam noise, RandomStream& rng) {
    const JointDist d = joint_distribution(first_basis, second_basis, noise);
    const double marginal = d.at(first_outcome, 0) + d.at(first_outcome, 1);
    const double p_zero = d.at(first_outcome, 0) / marginal;
    return rng.uniform() < p_zero ? 0 : 1;
}

}  // namespace qcs::bellpair
