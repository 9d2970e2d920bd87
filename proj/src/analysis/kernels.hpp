#pragma once

// Number-type back ends for the generic formulas in formulas.hpp.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>

#include "qcs/analysis/numeric.hpp"
#include "qcs/rules.hpp"

namespace qcs::analysis::detail {

class DoubleKernel {
  public:
    using Real = double;
    using Sum = KahanSum;

    explicit DoubleKernel(int max_n) : lf_(max_n) {}

    int capacity() const { return lf_.max_n(); }
    const LogFactorialTable& log_factorials() const { return lf_; }

    static Real zero() { return 0.0; }
    static Real one() { return 1.0; }
    static Real from_double(double x) { return x; }
    static Real ratio(long num, long den) { return static_cast<double>(num) / static_cast<double>(den); }
    // Sums of probabilities can land a few ulps outside [0, 1].
    static Real unit(Real x) { return std::clamp(x, 0.0, 1.0); }

    // C(received, draws - ell) C(total - received, ell) / C(total, draws).
    Real hypergeom(int total, int draws, int received, int ell) const {
        const double l = lf_.log_choose(received, draws - ell) + lf_.log_choose(total - received, ell) -
                         lf_.log_choose(total, draws);
        return std::isinf(l) ? 0.0 : std::exp(l);
    }

    Real binom_pmf(int n, int k, Real p, Real q) const {
        if (k < 0 || k > n) {
            return 0.0;
        }
        const double w = log_bernoulli_weight(n, k, p > 0 ? std::log(p) : 0.0, q > 0 ? std::log(q) : 0.0, p, q);
        return std::isinf(w) ? 0.0 : std::exp(lf_.log_choose(n, k) + w);
    }

    // P(Bin(n, p) >= k).
    Real tail(int n, int k, Real p, Real q) const {
        if (k <= 0) {
            return 1.0;
        }
        if (k > n) {
            return 0.0;
        }
        Sum s;
        for (int t = k; t <= n; ++t) {
            s.add(binom_pmf(n, t, p, q));
        }
        return std::min(1.0, s.value());
    }

    Real half_tail(int n, int k) const { return tail(n, k, 0.5, 0.5); }

    static int acceptance(int m_r, Real kappa, Real sigmas) { return acceptance_threshold(m_r, kappa, sigmas); }

  private:
    LogFactorialTable lf_;
};

inline mpz_class choose_z(int n, int k) {
    mpz_class out;
    if (k < 0 || k > n || n < 0) {
        return out;
    }
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

inline mpq_class pow_q(const mpq_class& x, int e) {
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), static_cast<unsigned long>(e));
    mpq_class out(num, den);
    out.canonicalize();
    return out;
}

class RationalKernel {
  public:
    using Real = mpq_class;

    class Sum {
      public:
        void add(const Real& x) { value_ += x; }
        const Real& value() const { return value_; }

      private:
        Real value_ = 0;
    };

    static Real zero() { return 0; }
    static Real one() { return 1; }
    static Real from_double(double x) { return Real(x); }
    static Real ratio(long num, long den) {
        Real r(num, den);
        r.canonicalize();
        return r;
    }
    static const Real& unit(const Real& x) { return x; }

    Real hypergeom(int total, int draws, int received, int ell) const {
        Real r(choose_z(received, draws - ell) * choose_z(total - received, ell), choose_z(total, draws));
        r.canonicalize();
        return r;
    }

    Real binom_pmf(int n, int k, const Real& p, const Real& q) const {
        if (k < 0 || k > n) {
            return 0;
        }
        return Real(choose_z(n, k)) * pow_q(p, k) * pow_q(q, n - k);
    }

    Real tail(int n, int k, const Real& p, const Real& q) const {
        Sum s;
        for (int t = std::max(k, 0); t <= n; ++t) {
            s.add(binom_pmf(n, t, p, q));
        }
        return s.value();
    }

    Real half_tail(int n, int k) const {
        mpz_class count = 0;
        for (int u = std::max(k, 0); u <= n; ++u) {
            count += choose_z(n, u);
        }
        mpz_class denom;
        mpz_ui_pow_ui(denom.get_mpz_t(), 2, static_cast<unsigned long>(n));
        Real r(count, denom);
        r.canonicalize();
        return r;
    }

    static int acceptance(int m_r, const Real& kappa, const Real& sigmas);
};

}  // namespace qcs::analysis::detail
