#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcs/analysis.hpp"
#include "qcs/montecarlo.hpp"

// Flat "key = value" scenario files. '#' starts a comment; blank lines are
// ignored; every key is optional. The same keys are accepted by --set.
namespace qcs::cli {

struct Scenario {
    // Protocol.
    int n = 100;
    double kappa = 0.05;
    double alpha_lo = 0.9;
    double alpha_hi = 0.99;
    double sigmas = 3.0;
    Stagger stagger = Stagger::AliceFirst;
    bool halt_on_suspicion = true;

    // Analysis.
    analysis::CheatMode mode = analysis::CheatMode::HonestNoiseless;
    // Bob's flip frequency for DishonestNoisy curves; empty means optimise.
    std::optional<double> f;
    double f_step = 0.02;
    double f_tolerance = 1e-3;
    // 4N values for search, scaling and figure.
    std::vector<int> grid{200, 400, 800, 1600, 2400};
    // analyze curves or scaling plot.
    std::string figure = "curves";

    // Simulation. One experiment per (m, flip_b) pair; an empty step list
    // means no interruption.
    int trials = 10000;
    std::vector<int> steps;
    std::vector<double> flips_b{0.0};
    double flip_a = 0.0;
    // Pins alpha in every trial; otherwise drawn from [alpha_lo, alpha_hi).
    std::optional<double> alpha;
    std::uint64_t seed = 1;

    protocol::ProtocolConfig protocol_config() const;
    AlphaDistribution alpha_distribution() const { return {alpha_lo, alpha_hi}; }
    void validate() const;
};

// Known keys, in the order they are documented.
const std::vector<std::string_view>& scenario_keys();

// Throws ConfigError naming the key on unknown keys or unparsable values.
void apply_setting(Scenario& s, std::string_view key, std::string_view value);
// KEY=VALUE form used by --set.
void apply_override(Scenario& s, std::string_view assignment);

Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

}  // namespace qcs::cli
