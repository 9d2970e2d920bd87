#include "qcs/cli/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "qcs/error.hpp"

namespace qcs::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
    throw ConfigError(std::string("bad value '") + std::string(value) + "' for " + std::string(key) + ": expected " +
                      std::string(want));
}

template <class T>
T parse_number(std::string_view key, std::string_view value, std::string_view want) {
    T out{};
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        bad_value(key, value, want);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(out)) {
            bad_value(key, value, want);
        }
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    return parse_number<double>(key, value, "a number");
}

int parse_int(std::string_view key, std::string_view value) {
    return parse_number<int>(key, value, "an integer");
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    bad_value(key, value, "true or false");
}

template <class F>
auto parse_list(std::string_view key, std::string_view value, F item) {
    std::vector<decltype(item(key, value))> out;
    while (true) {
        const auto comma = value.find(',');
        const std::string_view part = trim(value.substr(0, comma));
        if (part.empty()) {
            bad_value(key, value, "a comma-separated list");
        }
        out.push_back(item(key, part));
        if (comma == std::string_view::npos) {
            break;
        }
        value = value.substr(comma + 1);
    }
    return out;
}

}  // namespace

protocol::ProtocolConfig Scenario::protocol_config() const {
    protocol::ProtocolConfig cfg;
    cfg.n = n;
    cfg.kappa = bellpair::NoiseParam(kappa);
    cfg.alpha = alpha_distribution();
    cfg.acceptance_sigmas = sigmas;
    cfg.stagger = stagger;
    cfg.halt_on_suspicion = halt_on_suspicion;
    return cfg;
}

void Scenario::validate() const {
    if (n < 1) {
        throw ConfigError("n must be at least 1");
    }
    if (!(kappa >= 0.0 && kappa <= 1.0)) {
        throw ConfigError("kappa must lie in [0, 1]");
    }
    alpha_distribution().validate();
    if (!(sigmas > 0.0)) {
        throw ConfigError("sigmas must be positive");
    }
    if (f && !(*f >= 0.0 && *f <= 1.0)) {
        throw ConfigError("f must lie in [0, 1]");
    }
    if (!(f_step > 0.0 && f_step <= 1.0) || !(f_tolerance > 0.0)) {
        throw ConfigError("f_step must lie in (0, 1] and f_tolerance must be positive");
    }
    if (grid.empty()) {
        throw ConfigError("grid must list at least one 4N value");
    }
    for (int four_n : grid) {
        if (four_n < 4 || four_n % 4 != 0) {
            throw ConfigError("grid entries are 4N values: positive multiples of 4, got " + std::to_string(four_n));
        }
    }
    if (figure != "curves" && figure != "scaling") {
        throw ConfigError("figure must be curves or scaling");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    for (int m : steps) {
        if (m < 0 || m > 4 * n) {
            throw ConfigError("m values must lie in [0, 4N]");
        }
    }
    for (double fb : flips_b) {
        if (!(fb >= 0.0 && fb <= 1.0)) {
            throw ConfigError("flip_b values must lie in [0, 1]");
        }
    }
    if (!(flip_a >= 0.0 && flip_a <= 1.0)) {
        throw ConfigError("flip_a must lie in [0, 1]");
    }
    if (alpha && !(*alpha > 0.5 && *alpha < 1.0)) {
        throw ConfigError("alpha must lie in (1/2, 1)");
    }
}

const std::vector<std::string_view>& scenario_keys() {
    static const std::vector<std::string_view> keys{
        "n",      "kappa",  "alpha_lo", "alpha_hi", "sigmas", "stagger", "halt_on_suspicion", "mode",
        "f",      "f_step", "f_tolerance", "grid",  "figure", "trials",  "m",                 "flip_b",
        "flip_a", "alpha",  "seed"};
    return keys;
}

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "n") {
        s.n = parse_int(key, value);
    } else if (key == "kappa") {
        s.kappa = parse_real(key, value);
    } else if (key == "alpha_lo") {
        s.alpha_lo = parse_real(key, value);
    } else if (key == "alpha_hi") {
        s.alpha_hi = parse_real(key, value);
    } else if (key == "sigmas") {
        s.sigmas = parse_real(key, value);
    } else if (key == "stagger") {
        if (value == "alice_first") {
            s.stagger = Stagger::AliceFirst;
        } else if (value == "symmetric") {
            s.stagger = Stagger::Symmetric;
        } else {
            bad_value(key, value, "alice_first or symmetric");
        }
    } else if (key == "halt_on_suspicion") {
        s.halt_on_suspicion = parse_bool(key, value);
    } else if (key == "mode") {
        const auto mode = analysis::parse_mode(value);
        if (!mode) {
            bad_value(key, value, "one of HonestNoiseless, HonestNoisy, DishonestNoisy");
        }
        s.mode = *mode;
    } else if (key == "f") {
        if (value == "auto") {
            s.f.reset();
        } else {
            s.f = parse_real(key, value);
        }
    } else if (key == "f_step") {
        s.f_step = parse_real(key, value);
    } else if (key == "f_tolerance") {
        s.f_tolerance = parse_real(key, value);
    } else if (key == "grid") {
        s.grid = parse_list(key, value, parse_int);
    } else if (key == "figure") {
        s.figure = std::string(value);
    } else if (key == "trials") {
        s.trials = parse_int(key, value);
    } else if (key == "m") {
        if (value == "none") {
            s.steps.clear();
        } else {
            s.steps = parse_list(key, value, parse_int);
        }
    } else if (key == "flip_b") {
        s.flips_b = parse_list(key, value, parse_real);
    } else if (key == "flip_a") {
        s.flip_a = parse_real(key, value);
    } else if (key == "alpha") {
        if (value == "draw") {
            s.alpha.reset();
        } else {
            s.alpha = parse_real(key, value);
        }
    } else if (key == "seed") {
        s.seed = parse_number<std::uint64_t>(key, value, "an unsigned 64-bit integer");
    } else {
        std::string known;
        for (std::string_view k : scenario_keys()) {
            known += known.empty() ? "" : ", ";
            known += k;
        }
        throw ConfigError("unknown key '" + std::string(key) + "' (known: " + known + ")");
    }
}

void apply_override(Scenario& s, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not KEY=VALUE");
    }
    apply_setting(s, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view body = line;
        body = trim(body.substr(0, body.find('#')));
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("scenario line " + std::to_string(number) + ": expected key = value");
        }
        try {
            apply_setting(s, trim(body.substr(0, eq)), body.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("scenario line " + std::to_string(number) + ": " + e.what());
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario file " + path);
    }
    return parse_scenario(in);
}

}  // namespace qcs::cli
