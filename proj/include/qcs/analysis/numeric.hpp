#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace qcs::analysis {

// ln(n!) for n in [0, size], accumulated from ln(i) so every entry is exact to
// within a few ulps.
class LogFactorialTable {
  public:
    explicit LogFactorialTable(int max_n);

    int max_n() const { return static_cast<int>(table_.size()) - 1; }
    double operator()(int n) const { return table_[static_cast<std::size_t>(n)]; }

    // ln C(n, k); -inf when k is outside [0, n].
    double log_choose(int n, int k) const {
        if (k < 0 || k > n || n < 0) {
            return -std::numeric_limits<double>::infinity();
        }
        return (*this)(n) - (*this)(k) - (*this)(n - k);
    }

  private:
    std::vector<double> table_;
};

// Compensated summation (Neumaier variant, also exact for terms larger than
// the running sum).
class KahanSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// ln(p^k (1-p)^(n-k)) with the conventions 0^0 = 1 and ln 0 = -inf.
inline double log_bernoulli_weight(int n, int k, double log_p, double log_q, double p, double q) {
    double out = 0.0;
    if (k > 0) {
        if (p == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        out += k * log_p;
    }
    if (n - k > 0) {
        if (q == 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        out += (n - k) * log_q;
    }
    return out;
}

}  // namespace qcs::analysis
