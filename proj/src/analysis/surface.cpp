// Whole-curve evaluation of the expected cheat probability for large N.
//
// The generic formulas cost O(N^2) per (m, k); here every ingredient that does
// not depend on m is tabulated once and binomial/hypergeometric weights are
// truncated where they fall below e^-75 of their peak.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcs/analysis.hpp"
#include "qcs/analysis/numeric.hpp"
#include "qcs/error.hpp"
#include "qcs/parallel.hpp"

namespace qcs::analysis {

namespace {

constexpr double kLogCutoff = 75.0;

struct Window {
    int start = 0;
    std::vector<double> p;

    int end() const { return start + static_cast<int>(p.size()); }
};

// Bin(n, p) restricted to the outcomes within e^-75 of the mode.
Window binomial_window(const LogFactorialTable& lf, int n, double p, double q) {
    if (n == 0 || p <= 0.0) {
        return {0, {1.0}};
    }
    if (q <= 0.0) {
        return {n, {1.0}};
    }
    const double lp = std::log(p);
    const double lq = std::log(q);
    auto lpmf = [&](int t) { return lf.log_choose(n, t) + t * lp + (n - t) * lq; };
    const int mode = std::clamp(static_cast<int>(std::floor((n + 1) * p)), 0, n);
    const double top = lpmf(mode);
    int lo = mode;
    while (lo > 0 && lpmf(lo - 1) > top - kLogCutoff) {
        --lo;
    }
    int hi = mode;
    while (hi < n && lpmf(hi + 1) > top - kLogCutoff) {
        ++hi;
    }
    Window w{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1))};
    for (int t = lo; t <= hi; ++t) {
        w.p[static_cast<std::size_t>(t - lo)] = std::exp(lpmf(t));
    }
    return w;
}

// Hypergeometric weights over ell: C(received, draws - ell) C(total - received,
// ell) / C(total, draws), truncated like binomial_window.
Window hypergeom_window(const LogFactorialTable& lf, int total, int draws, int received) {
    const int lo = std::max(0, draws - received);
    const int hi = std::min(draws, total - received);
    const double norm = lf.log_choose(total, draws);
    std::vector<double> logs(static_cast<std::size_t>(hi - lo + 1));
    double top = -std::numeric_limits<double>::infinity();
    for (int ell = lo; ell <= hi; ++ell) {
        const double l = lf.log_choose(received, draws - ell) + lf.log_choose(total - received, ell) - norm;
        logs[static_cast<std::size_t>(ell - lo)] = l;
        top = std::max(top, l);
    }
    int a = lo;
    while (a < hi && logs[static_cast<std::size_t>(a - lo)] < top - kLogCutoff) {
        ++a;
    }
    int b = hi;
    while (b > a && logs[static_cast<std::size_t>(b - lo)] < top - kLogCutoff) {
        --b;
    }
    Window w{a, std::vector<double>(static_cast<std::size_t>(b - a + 1))};
    for (int ell = a; ell <= b; ++ell) {
        w.p[static_cast<std::size_t>(ell - a)] = std::exp(logs[static_cast<std::size_t>(ell - lo)]);
    }
    return w;
}

Window convolve(const Window& a, const Window& b) {
    Window out{a.start + b.start, std::vector<double>(a.p.size() + b.p.size() - 1, 0.0)};
    for (std::size_t i = 0; i < a.p.size(); ++i) {
        const double x = a.p[i];
        double* dst = out.p.data() + i;
        for (std::size_t j = 0; j < b.p.size(); ++j) {
            dst[j] += x * b.p[j];
        }
    }
    return out;
}

// P(X >= k) from a window, for k in [k_lo, k_lo + count).
void window_tails(const Window& w, int k_lo, int count, double* out) {
    std::vector<double> suffix(w.p.size() + 1, 0.0);
    KahanSum acc;
    for (std::size_t i = w.p.size(); i-- > 0;) {
        acc.add(w.p[i]);
        suffix[i] = acc.value();
    }
    for (int j = 0; j < count; ++j) {
        const int k = k_lo + j;
        if (k <= w.start) {
            out[j] = std::min(1.0, suffix[0]);
        } else if (k >= w.end()) {
            out[j] = 0.0;
        } else {
            out[j] = std::min(1.0, suffix[static_cast<std::size_t>(k - w.start)]);
        }
    }
}

double window_tail(const Window& w, int k) {
    double out = 0.0;
    window_tails(w, k, 1, &out);
    return out;
}

class CheatSurface {
  public:
    CheatSurface(int n, double kappa, const AlphaDistribution& dist, CheatMode mode, const SearchOptions& options)
        : n_(n),
          four_n_(4 * n),
          mode_(mode),
          kappa_(mode == CheatMode::HonestNoiseless ? 0.0 : kappa),
          options_(options),
          lf_(4 * n + 1) {
        if (n < 1) {
            throw InputError("N must be positive");
        }
        if (!(kappa >= 0.0 && kappa <= 1.0)) {
            throw InputError("kappa must lie in [0, 1]");
        }
        if (!(options.sigmas > 0.0)) {
            throw InputError("acceptance sigmas must be positive");
        }
        const auto weights = threshold_weights(n, dist);
        k_lo_ = weights.front().k;
        width_ = weights.back().k - k_lo_ + 1;
        w_.assign(static_cast<std::size_t>(width_), 0.0);
        for (const auto& tw : weights) {
            w_[static_cast<std::size_t>(tw.k - k_lo_)] = tw.weight;
        }
        honest_ = correlation(kappa_);
        accept_.resize(static_cast<std::size_t>(2 * n) + 1);
        for (int m_r = 0; m_r <= 2 * n; ++m_r) {
            accept_[static_cast<std::size_t>(m_r)] = acceptance_threshold(m_r, kappa_, options.sigmas);
        }
        build();
    }

    int four_n() const { return four_n_; }

    std::vector<double> curve(double f) {
        prepare_flip(f);
        if (mode_ == CheatMode::DishonestNoisy) {
            std::vector<int> all(static_cast<std::size_t>(n_) + 1);
            std::iota(all.begin(), all.end(), 0);
            ensure_flip_rows(all);
        }
        std::vector<double> out(static_cast<std::size_t>(four_n_));
        parallel_for(out.size(), options_.threads, [&](std::size_t i) { out[i] = value(static_cast<int>(i) + 1); });
        return out;
    }

    // Largest value over m = 1..4N at flip frequency f, provided it exceeds
    // floor; otherwise returns floor and leaves best_m untouched. Candidates
    // are visited in decreasing order of an upper bound that drops the
    // (1 - Alice binds) factor.
    double max_over_m(double f, double floor, int& best_m) {
        prepare_flip(f);
        std::vector<double> bound(static_cast<std::size_t>(four_n_) + 1, 0.0);
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(four_n_));
        for (int m = 1; m <= four_n_; ++m) {
            bound[static_cast<std::size_t>(m)] = reach(m) * bob_binds_[static_cast<std::size_t>(m)];
            order.push_back(m);
        }
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return bound[static_cast<std::size_t>(a)] > bound[static_cast<std::size_t>(b)];
        });
        double best = floor;
        for (const int m : order) {
            if (bound[static_cast<std::size_t>(m)] <= best) {
                break;
            }
            if (mode_ == CheatMode::DishonestNoisy) {
                const Window& qw = q_[static_cast<std::size_t>(m)];
                std::vector<int> rows(qw.p.size());
                std::iota(rows.begin(), rows.end(), qw.start);
                ensure_flip_rows(rows);
            }
            const double v = value(m);
            if (v > best || (v == best && best_m > 0 && m < best_m)) {
                best = v;
                best_m = m;
            }
        }
        return best;
    }

  private:
    std::size_t row(int ell) const { return static_cast<std::size_t>(ell) * static_cast<std::size_t>(width_); }

    // P(Bin(N - ell, corr) + Bin(ell, 1/2) >= k) for every k in the window.
    void guess_row(int ell, const CorrelationPair& corr, double* out) const {
        const Window own = binomial_window(lf_, n_ - ell, corr.p_eq, corr.p_neq);
        window_tails(convolve(own, half_[static_cast<std::size_t>(ell)]), k_lo_, width_, out);
    }

    // sum_ell q(ell) rows[ell][.]
    void mix_rows(const Window& qw, const std::vector<double>& rows, double* out) const {
        std::fill(out, out + width_, 0.0);
        for (std::size_t i = 0; i < qw.p.size(); ++i) {
            const double q = qw.p[i];
            const double* src = rows.data() + row(qw.start + static_cast<int>(i));
            for (int j = 0; j < width_; ++j) {
                out[j] += q * src[j];
            }
        }
    }

    std::vector<double> pass_tails(const CorrelationPair& corr) const {
        std::vector<double> out(static_cast<std::size_t>(2 * n_) + 1);
        for (int m_r = 0; m_r <= 2 * n_; ++m_r) {
            const Window w = binomial_window(lf_, m_r, corr.p_eq, corr.p_neq);
            out[static_cast<std::size_t>(m_r)] = window_tail(w, accept_[static_cast<std::size_t>(m_r)]);
        }
        return out;
    }

    // Pass bound for every received count r = 0..4N.
    std::vector<double> pass_bounds(const std::vector<double>& tails) const {
        std::vector<double> out(static_cast<std::size_t>(four_n_) + 1);
        for (int r = 0; r <= four_n_; ++r) {
            const Window& sw = shared_[static_cast<std::size_t>(r)];
            KahanSum acc;
            for (std::size_t i = 0; i < sw.p.size(); ++i) {
                const int ell = sw.start + static_cast<int>(i);
                acc.add(sw.p[i] * tails[static_cast<std::size_t>(2 * n_ - ell)]);
            }
            out[static_cast<std::size_t>(r)] = std::min(1.0, acc.value());
        }
        return out;
    }

    void build() {
        const auto count = static_cast<std::size_t>(n_) + 1;
        const auto steps = static_cast<std::size_t>(four_n_) + 1;
        half_.resize(count);
        parallel_for(count, options_.threads, [&](std::size_t ell) {
            half_[ell] = binomial_window(lf_, static_cast<int>(ell), 0.5, 0.5);
        });

        bth_.resize(static_cast<std::size_t>(width_));
        window_tails(binomial_window(lf_, n_, honest_.p_eq, honest_.p_neq), k_lo_, width_, bth_.data());

        honest_rows_.assign(count * static_cast<std::size_t>(width_), 0.0);
        parallel_for(count, options_.threads, [&](std::size_t ell) {
            guess_row(static_cast<int>(ell), honest_, honest_rows_.data() + row(static_cast<int>(ell)));
        });

        q_.resize(steps);
        shared_.resize(steps);
        parallel_for(steps, options_.threads, [&](std::size_t r) {
            q_[r] = hypergeom_window(lf_, four_n_, n_, static_cast<int>(r));
            shared_[r] = hypergeom_window(lf_, four_n_, 2 * n_, static_cast<int>(r));
        });

        bta_.assign(steps * static_cast<std::size_t>(width_), 0.0);
        bob_binds_.assign(steps, 0.0);
        parallel_for(steps, options_.threads, [&](std::size_t r) {
            double* dst = bta_.data() + r * static_cast<std::size_t>(width_);
            mix_rows(q_[r], honest_rows_, dst);
            KahanSum acc;
            for (int j = 0; j < width_; ++j) {
                acc.add(w_[static_cast<std::size_t>(j)] * bth_[static_cast<std::size_t>(j)] * dst[j]);
            }
            bob_binds_[r] = acc.value();
        });

        if (mode_ == CheatMode::HonestNoiseless) {
            pass_honest_.assign(steps, 1.0);
        } else {
            pass_honest_ = pass_bounds(pass_tails(honest_));
        }
    }

    void prepare_flip(double f) {
        if (mode_ != CheatMode::DishonestNoisy) {
            return;
        }
        if (!(f >= 0.0 && f <= 1.0)) {
            throw InputError("f must lie in [0, 1]");
        }
        if (flip_ready_ && f == flip_) {
            return;
        }
        flip_ = f;
        flip_ready_ = true;
        tilde_ = flipped_correlation(f, kappa_);
        pass_tilde_ = pass_bounds(pass_tails(tilde_));
        flip_rows_.assign((static_cast<std::size_t>(n_) + 1) * static_cast<std::size_t>(width_), 0.0);
        flip_row_done_.assign(static_cast<std::size_t>(n_) + 1, 0);
    }

    void ensure_flip_rows(const std::vector<int>& ells) {
        std::vector<int> missing;
        for (const int ell : ells) {
            if (!flip_row_done_[static_cast<std::size_t>(ell)]) {
                missing.push_back(ell);
            }
        }
        parallel_for(missing.size(), options_.threads, [&](std::size_t i) {
            guess_row(missing[i], tilde_, flip_rows_.data() + row(missing[i]));
        });
        for (const int ell : missing) {
            flip_row_done_[static_cast<std::size_t>(ell)] = 1;
        }
    }

    // Reach factor P_ABS * P_BAS for interruption at m.
    double reach(int m) const {
        if (mode_ == CheatMode::DishonestNoisy) {
            return pass_honest_[static_cast<std::size_t>(m)] * pass_tilde_[static_cast<std::size_t>(m)];
        }
        return pass_honest_[static_cast<std::size_t>(m)] * pass_honest_[static_cast<std::size_t>(m - 1)];
    }

    double value(int m) const {
        const double* bob = bta_.data() + static_cast<std::size_t>(m) * static_cast<std::size_t>(width_);
        std::vector<double> alice_buf;
        const double* alice = nullptr;
        if (mode_ == CheatMode::DishonestNoisy) {
            alice_buf.resize(static_cast<std::size_t>(width_));
            mix_rows(q_[static_cast<std::size_t>(m)], flip_rows_, alice_buf.data());
            alice = alice_buf.data();
        } else {
            alice = bta_.data() + static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(width_);
        }
        KahanSum acc;
        for (int j = 0; j < width_; ++j) {
            const double own = bth_[static_cast<std::size_t>(j)];
            acc.add(w_[static_cast<std::size_t>(j)] * own * bob[j] * std::max(0.0, 1.0 - own * alice[j]));
        }
        return std::clamp(reach(m) * acc.value(), 0.0, 1.0);
    }

    int n_;
    int four_n_;
    CheatMode mode_;
    double kappa_;
    SearchOptions options_;
    LogFactorialTable lf_;
    int k_lo_ = 0;
    int width_ = 0;
    std::vector<double> w_;
    CorrelationPair honest_{1.0, 0.0};
    std::vector<int> accept_;

    std::vector<Window> half_;
    std::vector<double> bth_;
    std::vector<double> honest_rows_;
    std::vector<Window> q_;
    std::vector<Window> shared_;
    std::vector<double> bta_;
    std::vector<double> bob_binds_;
    std::vector<double> pass_honest_;

    bool flip_ready_ = false;
    double flip_ = 0.0;
    CorrelationPair tilde_{1.0, 0.0};
    std::vector<double> pass_tilde_;
    std::vector<double> flip_rows_;
    std::vector<char> flip_row_done_;
};

std::vector<CurvePoint> to_points(const std::vector<double>& values) {
    std::vector<CurvePoint> out;
    out.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({static_cast<int>(i) + 1, values[i]});
    }
    return out;
}

}  // namespace

std::vector<CurvePoint> expected_cheat_curve(int n, double kappa, const AlphaDistribution& dist, CheatMode mode,
                                             double f, const SearchOptions& options) {
    CheatSurface surface(n, kappa, dist, mode, options);
    return to_points(surface.curve(mode == CheatMode::DishonestNoisy ? f : 0.0));
}

CheatAssessment max_cheat_search(int n, double kappa, const AlphaDistribution& dist, CheatMode mode,
                                 const SearchOptions& options) {
    if (!(options.f_step > 0.0 && options.f_step <= 1.0) || !(options.f_tolerance > 0.0)) {
        throw InputError("f search step and tolerance must be positive");
    }
    CheatSurface surface(n, kappa, dist, mode, options);
    double best_f = 0.0;
    if (mode == CheatMode::DishonestNoisy) {
        double best = -1.0;
        int ignored_m = 0;
        const int cells = static_cast<int>(std::lround(1.0 / options.f_step));
        for (int i = 0; i <= cells; ++i) {
            const double f = std::min(1.0, i * options.f_step);
            const double g = surface.max_over_m(f, best, ignored_m);
            if (g > best) {
                best = g;
                best_f = f;
            }
        }
        // Golden-section refinement around the best grid cell. Only a strictly
        // better point replaces the grid maximum.
        auto evaluate = [&](double f) {
            int m = 0;
            const double g = surface.max_over_m(f, -1.0, m);
            if (g > best) {
                best = g;
                best_f = f;
            }
            return g;
        };
        const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = std::max(0.0, best_f - options.f_step);
        double b = std::min(1.0, best_f + options.f_step);
        double c = b - ratio * (b - a);
        double d = a + ratio * (b - a);
        double gc = evaluate(c);
        double gd = evaluate(d);
        while (b - a > options.f_tolerance) {
            if (gc >= gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - ratio * (b - a);
                gc = evaluate(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + ratio * (b - a);
                gd = evaluate(d);
            }
        }
    }

    CheatAssessment out;
    out.mode = mode;
    out.four_n = 4 * n;
    out.best_f = best_f;
    out.curve = to_points(surface.curve(best_f));
    out.best_m = out.curve.front().m;
    out.value = out.curve.front().value;
    for (const CurvePoint& p : out.curve) {
        if (p.value > out.value) {
            out.value = p.value;
            out.best_m = p.m;
        }
    }
    if (!std::isfinite(out.value)) {
        throw NumericError("cheat search produced a non-finite value");
    }
    return out;
}

}  // namespace qcs::analysis
