#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "qcs/rules.hpp"

// Binding and cheating probabilities for an exchange interrupted at step m.
// Floating-point versions, evaluated with log-domain binomial terms; the exact
// rational counterparts live in qcs/analysis/exact.hpp.
//
// Throughout, n is the N of the protocol (4N rounds) and a threshold k is the
// number of matches Trent requires out of N, k = floor(alpha * N).
namespace qcs::analysis {

// Which client's point of view sets the number of received results: Bob
// always holds m of Alice's results; under the Alice-first stagger Alice holds
// m - 1 of Bob's (clamped at 0).
enum class Role { BobView, AliceView };

enum class PassDirection { AlicesTestOfBob, BobsTestOfAlice };

enum class CheatMode { HonestNoiseless, HonestNoisy, DishonestNoisy };

enum class NumericMode { LogDomainFloat, ExactRational };

std::string_view mode_name(CheatMode mode);
std::optional<CheatMode> parse_mode(std::string_view name);

template <class T>
struct BasicCorrelation {
    T p_eq;
    T p_neq;
};
using CorrelationPair = BasicCorrelation<double>;

struct MeanVar {
    double mu = 0.0;
    double sigma = 0.0;
    double variance = 0.0;
};

int received_count(int m, Role role);

// C(r, N - ell) C(4N - r, ell) / C(4N, N), r the received count for role.
double q_ell(int n, int m, int ell, Role role);

double p_bind_noiseless_given_ell(int n, double alpha, int ell);
double p_bind_noiseless(int n, int m, double alpha, Role role);
// Bob binds with m results, Alice fails with m - 1.
double p_cheat_noiseless(int n, int m, double alpha);

CorrelationPair correlation(double kappa);
MeanVar mean_var(int m_r, double kappa);
// Agreement statistics of a client that reports each bit flipped with
// probability f.
CorrelationPair flipped_correlation(double f, double kappa);

// P(at least floor(alpha N) of N own results agree with Trent).
double p_bth(int n, double alpha, double kappa);

// Test on the other client's results: received ones agree with probability
// corr.p_eq, missing ones are uniform guesses.
double p_bta(int n, int m, double alpha, const CorrelationPair& corr, Role role);

// Single-step upper bound on passing the running acceptance test: probability
// that the check results received by step m meet the acceptance threshold of
// the honest model. The receiver is Alice for AlicesTestOfBob.
double p_pass_bound(int n, int m, double kappa, const CorrelationPair& corr, PassDirection direction,
                    Stagger stagger = Stagger::AliceFirst, double sigmas = 3.0);

// HonestNoiseless ignores kappa. HonestNoisy uses the Alice-first stagger and
// honest statistics; DishonestNoisy lets Bob flip with frequency f under the
// symmetric stagger.
double p_cheat(int n, int m, double alpha, double kappa, double f, CheatMode mode, double sigmas = 3.0,
               NumericMode numeric = NumericMode::LogDomainFloat);

struct ThresholdWeight {
    int k = 0;
    double weight = 0.0;
};

// Probability mass that the alpha distribution puts on each threshold k.
std::vector<ThresholdWeight> threshold_weights(int n, const AlphaDistribution& dist);

double expected_cheat(int n, int m, double f, double kappa, const AlphaDistribution& dist, CheatMode mode,
                      double sigmas = 3.0, NumericMode numeric = NumericMode::LogDomainFloat);

struct CurvePoint {
    int m = 0;
    double value = 0.0;
};

struct CheatAssessment {
    CheatMode mode = CheatMode::HonestNoiseless;
    int four_n = 0;
    int best_m = 0;
    double best_f = 0.0;
    double value = 0.0;
    // Expected cheat probability at best_f for m = 1..4N.
    std::vector<CurvePoint> curve;
};

struct SearchOptions {
    double sigmas = 3.0;
    double f_step = 0.02;
    double f_tolerance = 1e-3;
    int threads = 1;
};

// Expected cheat probability for m = 1..4N at a fixed flip frequency.
std::vector<CurvePoint> expected_cheat_curve(int n, double kappa, const AlphaDistribution& dist, CheatMode mode,
                                             double f, const SearchOptions& options = {});

// Maximum over m (and over f for DishonestNoisy) of the expected cheat
// probability.
CheatAssessment max_cheat_search(int n, double kappa, const AlphaDistribution& dist, CheatMode mode,
                                 const SearchOptions& options = {});

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Least squares of ln(value) against ln(N). Needs at least three points with
// positive N and value.
ScalingFit scaling_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace qcs::analysis
