#pragma once

// Generic analytic formulas, shared by the floating-point and the rational
// back ends. Thresholds arrive as integers: k = floor(alpha N) for Trent's
// tests and accept[m_r] for the running acceptance test on m_r check results.

#include <algorithm>
#include <vector>

#include "qcs/analysis.hpp"

namespace qcs::analysis::detail {

template <class K>
using RealOf = typename K::Real;

template <class K>
using CorrOf = BasicCorrelation<RealOf<K>>;

template <class K>
RealOf<K> q_ell(const K& kern, int n, int received, int ell) {
    return kern.hypergeom(4 * n, n, received, ell);
}

// Noiseless bind probability with ell of the N relevant results missing.
template <class K>
RealOf<K> bind_noiseless_given_ell(const K& kern, int n, int k, int ell) {
    if (k <= n - ell) {
        return K::one();
    }
    return kern.half_tail(ell, k - (n - ell));
}

template <class K>
RealOf<K> bind_noiseless(const K& kern, int n, int received, int k) {
    typename K::Sum s;
    for (int ell = 0; ell <= n; ++ell) {
        const RealOf<K> q = q_ell(kern, n, received, ell);
        if (q != 0) {
            s.add(q * bind_noiseless_given_ell(kern, n, k, ell));
        }
    }
    return K::unit(s.value());
}

// P(Bin(N - ell, p_eq) + Bin(ell, 1/2) >= k).
template <class K>
RealOf<K> tail_with_guesses(const K& kern, int n, int ell, int k, const CorrOf<K>& corr) {
    typename K::Sum s;
    for (int t = 0; t <= n - ell; ++t) {
        const RealOf<K> pm = kern.binom_pmf(n - ell, t, corr.p_eq, corr.p_neq);
        if (pm != 0) {
            s.add(pm * kern.half_tail(ell, k - t));
        }
    }
    return K::unit(s.value());
}

template <class K>
RealOf<K> bta(const K& kern, int n, int received, int k, const CorrOf<K>& corr) {
    typename K::Sum s;
    for (int ell = 0; ell <= n; ++ell) {
        const RealOf<K> q = q_ell(kern, n, received, ell);
        if (q != 0) {
            s.add(q * tail_with_guesses(kern, n, ell, k, corr));
        }
    }
    return K::unit(s.value());
}

template <class K>
RealOf<K> bth(const K& kern, int n, int k, const CorrOf<K>& corr) {
    return kern.tail(n, k, corr.p_eq, corr.p_neq);
}

// accept[m_r] for m_r = 0..2N.
template <class K>
RealOf<K> pass_bound(const K& kern, int n, int received, const CorrOf<K>& corr, const std::vector<int>& accept) {
    typename K::Sum s;
    for (int ell = 0; ell <= 2 * n; ++ell) {
        const RealOf<K> q = kern.hypergeom(4 * n, 2 * n, received, ell);
        if (q != 0) {
            const int m_r = 2 * n - ell;
            s.add(q * kern.tail(m_r, accept[static_cast<std::size_t>(m_r)], corr.p_eq, corr.p_neq));
        }
    }
    return K::unit(s.value());
}

template <class K>
std::vector<int> acceptance_table(int n, const RealOf<K>& kappa, const RealOf<K>& sigmas) {
    std::vector<int> out(static_cast<std::size_t>(2 * n) + 1);
    for (int m_r = 0; m_r <= 2 * n; ++m_r) {
        out[static_cast<std::size_t>(m_r)] = K::acceptance(m_r, kappa, sigmas);
    }
    return out;
}

template <class K>
RealOf<K> cheat(const K& kern, int n, int m, int k, const CorrOf<K>& honest, const CorrOf<K>& tilde, CheatMode mode,
                const std::vector<int>& accept) {
    const int r_bob = m;
    const int r_alice = mode == CheatMode::DishonestNoisy ? m : std::max(m - 1, 0);
    if (mode == CheatMode::HonestNoiseless) {
        const RealOf<K> bob = bind_noiseless(kern, n, r_bob, k);
        const RealOf<K> alice = bind_noiseless(kern, n, r_alice, k);
        return bob * (K::one() - alice);
    }
    const CorrOf<K>& sent_by_bob = mode == CheatMode::DishonestNoisy ? tilde : honest;
    const RealOf<K> p_abs = pass_bound(kern, n, r_bob, honest, accept);
    const RealOf<K> p_bas = pass_bound(kern, n, r_alice, sent_by_bob, accept);
    const RealOf<K> own = bth(kern, n, k, honest);
    const RealOf<K> bob = own * bta(kern, n, r_bob, k, honest);
    const RealOf<K> alice = own * bta(kern, n, r_alice, k, sent_by_bob);
    return p_abs * p_bas * bob * (K::one() - alice);
}

// Overlap of [lo, hi) with each cell [k/N, (k+1)/N), divided by hi - lo.
template <class K>
std::vector<std::pair<int, RealOf<K>>> weights(int n, const AlphaDistribution& dist) {
    dist.validate();
    const RealOf<K> lo = K::from_double(dist.lo);
    const RealOf<K> hi = K::from_double(dist.hi);
    const RealOf<K> width = hi - lo;
    std::vector<std::pair<int, RealOf<K>>> out;
    const int k_lo = threshold_count(dist.lo, n);
    const int k_hi = threshold_count(dist.hi, n);
    for (int k = k_lo; k <= k_hi; ++k) {
        const RealOf<K> cell_lo = K::ratio(k, n);
        const RealOf<K> cell_hi = K::ratio(k + 1, n);
        const RealOf<K> a = cell_lo > lo ? cell_lo : lo;
        const RealOf<K> b = cell_hi < hi ? cell_hi : hi;
        if (b > a) {
            out.emplace_back(k, (b - a) / width);
        }
    }
    return out;
}

template <class K>
RealOf<K> expected_cheat(const K& kern, int n, int m, const AlphaDistribution& dist, const CorrOf<K>& honest,
                         const CorrOf<K>& tilde, CheatMode mode, const std::vector<int>& accept) {
    typename K::Sum s;
    for (const auto& [k, w] : weights<K>(n, dist)) {
        s.add(w * cheat(kern, n, m, k, honest, tilde, mode, accept));
    }
    return K::unit(s.value());
}

}  // namespace qcs::analysis::detail
