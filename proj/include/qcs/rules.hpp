#pragma once

#include "qcs/random.hpp"

namespace qcs {

enum class AlphaShape { Uniform };

enum class Stagger : unsigned char {
    // Both clients hold m results from each other at interruption.
    Symmetric,
    // Alice sends first: Bob holds m of her results, she holds m - 1 of his.
    AliceFirst,
};

// Public distribution p(alpha) from which Trent draws the acceptance rate.
// Support must lie strictly inside (1/2, 1).
struct AlphaDistribution {
    double lo = 0.9;
    double hi = 0.99;
    AlphaShape shape = AlphaShape::Uniform;

    void validate() const;
    double draw(RandomStream& rng) const;
};

// Number of matches Trent requires out of n checked pairs: floor(alpha * n).
// An alpha that equals k/n (as a double) belongs to threshold k even when the
// product alpha * n rounds just below k.
int threshold_count(double alpha, int n);

// Smallest integer count of consistent results that satisfies
// count >= mu - sigmas * sigma for the honest binomial model over m_r check
// results, clamped to [0, m_r]. mu and sigma follow the depolarized agreement
// probability 1 - kappa / 2.
int acceptance_threshold(int m_r, double kappa, double sigmas);

}  // namespace qcs
