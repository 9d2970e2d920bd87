#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcs/analysis.hpp"
#include "qcs/cli/scenario.hpp"

namespace qcs::cli {

inline constexpr std::string_view kCsvHeader = "mode,four_n,m,f,alpha_lo,alpha_hi,kappa,value";
// simulate appends these after the common columns.
inline constexpr std::string_view kSimulateExtra = "quantity,std_error,ci95_lo,ci95_hi,trials";

enum class ExitCode : int { Ok = 0, Numeric = 1, Usage = 2 };

// 12 significant digits, '.' separator, no locale.
std::string format_real(double v);

struct Row {
    std::string mode;
    int four_n = 0;
    int m = 0;
    double f = 0.0;
    double alpha_lo = 0.0;
    double alpha_hi = 0.0;
    double kappa = 0.0;
    double value = 0.0;
};

std::string csv_line(const Row& row);

// Expected cheat probability for m = 1..4N. DishonestNoisy without a fixed f
// uses the optimal f.
std::vector<Row> analyze_rows(const Scenario& s, int threads);
// One row per grid entry: m and f are the maximisers, value the maximum.
std::vector<Row> search_rows(const Scenario& s, int threads);

struct SimulationRow {
    Row row;
    std::string quantity;
    montecarlo::Estimate estimate;
};
std::vector<SimulationRow> simulate_rows(const Scenario& s, int threads);
std::string csv_line(const SimulationRow& row);

// max over m of the expected cheat probability at a given 4N. Replaceable so
// that tests can feed synthetic data through the scaling path.
using MaxEvaluator = std::function<double(int four_n)>;
MaxEvaluator search_evaluator(const Scenario& s, int threads);

struct ScalingReport {
    // (N, max expected cheat probability).
    std::vector<std::pair<double, double>> points;
    analysis::ScalingFit fit;
};
ScalingReport scaling_report(const std::vector<int>& grid, const MaxEvaluator& evaluate);

// Entry point behind the qcsign executable. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcs::cli
