#include "qcs/cli/commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include "qcs/cli/svg.hpp"
#include "qcs/error.hpp"
#include "qcs/parallel.hpp"

namespace qcs::cli {

namespace {

using analysis::CheatAssessment;
using analysis::CheatMode;

analysis::SearchOptions search_options(const Scenario& s, int threads) {
    analysis::SearchOptions o;
    o.sigmas = s.sigmas;
    o.f_step = s.f_step;
    o.f_tolerance = s.f_tolerance;
    o.threads = threads;
    return o;
}

// Best (m, f) at one size. A fixed f only leaves m to optimise.
CheatAssessment assess(const Scenario& s, int n, int threads) {
    const auto opts = search_options(s, threads);
    const AlphaDistribution dist = s.alpha_distribution();
    if (s.mode != CheatMode::DishonestNoisy || !s.f) {
        return analysis::max_cheat_search(n, s.kappa, dist, s.mode, opts);
    }
    CheatAssessment a;
    a.mode = s.mode;
    a.four_n = 4 * n;
    a.best_f = *s.f;
    a.curve = analysis::expected_cheat_curve(n, s.kappa, dist, s.mode, *s.f, opts);
    const auto best = std::max_element(a.curve.begin(), a.curve.end(),
                                       [](const auto& l, const auto& r) { return l.value < r.value; });
    a.best_m = best->m;
    a.value = best->value;
    return a;
}

Row base_row(const Scenario& s, int four_n) {
    Row r;
    r.mode = std::string(analysis::mode_name(s.mode));
    r.four_n = four_n;
    r.alpha_lo = s.alpha_lo;
    r.alpha_hi = s.alpha_hi;
    r.kappa = s.kappa;
    return r;
}

std::vector<Row> curve_rows(const Scenario& s, const CheatAssessment& a) {
    std::vector<Row> rows;
    rows.reserve(a.curve.size());
    for (const auto& pt : a.curve) {
        Row r = base_row(s, a.four_n);
        r.m = pt.m;
        r.f = a.best_f;
        r.value = pt.value;
        rows.push_back(r);
    }
    return rows;
}

CheatAssessment analyze_assessment(const Scenario& s, int threads) {
    if (s.mode == CheatMode::DishonestNoisy && !s.f) {
        return assess(s, s.n, threads);
    }
    CheatAssessment a;
    a.mode = s.mode;
    a.four_n = 4 * s.n;
    a.best_f = s.mode == CheatMode::DishonestNoisy ? *s.f : 0.0;
    a.curve = analysis::expected_cheat_curve(s.n, s.kappa, s.alpha_distribution(), s.mode, a.best_f,
                                             search_options(s, threads));
    return a;
}

std::vector<std::pair<double, double>> curve_points(const CheatAssessment& a) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(a.curve.size());
    for (const auto& pt : a.curve) {
        pts.emplace_back(pt.m, pt.value);
    }
    return pts;
}

std::string curve_title(const Scenario& s) {
    return fmt::format("{}: expected cheat probability, kappa = {:g}, alpha in [{:g}, {:g}]",
                       analysis::mode_name(s.mode), s.kappa, s.alpha_lo, s.alpha_hi);
}

enum class Format { Csv, Svg, Both };

struct Outputs {
    Format format = Format::Csv;
    std::string path;

    bool csv() const { return format != Format::Svg; }
    bool svg() const { return format != Format::Csv; }

    std::string svg_path() const {
        if (format == Format::Svg) {
            return path;
        }
        const auto dot = path.rfind(".csv");
        if (dot != std::string::npos && dot + 4 == path.size()) {
            return path.substr(0, dot) + ".svg";
        }
        return path + ".svg";
    }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write " + path);
    }
    f << text;
    if (!f) {
        throw ConfigError("failed writing " + path);
    }
}

// CSV goes to --out when given, otherwise to stdout.
void emit_csv(const Outputs& o, const std::string& text, std::ostream& out) {
    if (!o.csv()) {
        return;
    }
    if (o.path.empty()) {
        out << text;
    } else {
        write_file(o.path, text);
    }
}

void emit_svg(const Outputs& o, const std::string& svg) {
    if (o.svg()) {
        write_file(o.svg_path(), svg);
    }
}

template <class R>
std::string table(std::string_view header, const std::vector<R>& rows) {
    std::string text(header);
    text += '\n';
    for (const R& r : rows) {
        text += csv_line(r);
        text += '\n';
    }
    return text;
}

void run_analyze(const Scenario& s, int threads, const Outputs& o, std::ostream& out) {
    const CheatAssessment a = analyze_assessment(s, threads);
    emit_csv(o, table(kCsvHeader, curve_rows(s, a)), out);
    if (o.svg()) {
        ChartSpec chart{curve_title(s), "interruption step m", "expected cheat probability"};
        emit_svg(o, render_line_chart({{fmt::format("4N = {}", a.four_n), curve_points(a)}}, chart));
    }
}

void run_search(const Scenario& s, int threads, const Outputs& o, std::ostream& out) {
    const auto rows = search_rows(s, threads);
    emit_csv(o, table(kCsvHeader, rows), out);
    if (o.svg()) {
        Series series{"max over m", {}};
        for (const Row& r : rows) {
            series.points.emplace_back(r.four_n, r.value);
        }
        ChartSpec chart{curve_title(s), "total rounds 4N", "max expected cheat probability", true, true};
        emit_svg(o, render_line_chart({series}, chart));
    }
}

std::string scaling_svg(const Scenario& s, const ScalingReport& rep) {
    Series data{"max over m", {}};
    Series fit{fmt::format("fit, slope {:.3f}", rep.fit.slope), {}};
    for (const auto& [n, v] : rep.points) {
        data.points.emplace_back(4.0 * n, v);
        fit.points.emplace_back(4.0 * n, std::exp(rep.fit.intercept) * std::pow(n, rep.fit.slope));
    }
    ChartSpec chart{fmt::format("{}: scaling of the maximal cheat probability", analysis::mode_name(s.mode)),
                    "total rounds 4N", "max expected cheat probability", true, true};
    return render_line_chart({data, fit}, chart);
}

void run_scaling(const Scenario& s, int threads, const Outputs& o, std::ostream& out) {
    // Search once per size and reuse the rows for both the table and the fit.
    const auto rows = search_rows(s, threads);
    std::vector<std::pair<double, double>> pts;
    for (const Row& r : rows) {
        pts.emplace_back(r.four_n / 4, r.value);
    }
    const ScalingReport rep{pts, analysis::scaling_slope(pts)};
    if (o.csv() && !o.path.empty()) {
        write_file(o.path, table(kCsvHeader, rows));
    }
    emit_svg(o, scaling_svg(s, rep));
    out << fmt::format("slope,{}\nintercept,{}\nr_squared,{}\n", format_real(rep.fit.slope),
                       format_real(rep.fit.intercept), format_real(rep.fit.r_squared));
}

void run_simulate(const Scenario& s, int threads, const Outputs& o, std::ostream& out) {
    const auto rows = simulate_rows(s, threads);
    std::string header = std::string(kCsvHeader) + "," + std::string(kSimulateExtra);
    emit_csv(o, table(header, rows), out);
    if (o.svg()) {
        // Cheat estimate against m for each flip frequency.
        std::vector<Series> series;
        for (const SimulationRow& r : rows) {
            if (r.quantity != "cheat") {
                continue;
            }
            const std::string label = fmt::format("f = {:g}", r.row.f);
            auto it = std::find_if(series.begin(), series.end(), [&](const Series& x) { return x.label == label; });
            if (it == series.end()) {
                series.push_back({label, {}});
                it = series.end() - 1;
            }
            it->points.emplace_back(r.row.m, r.estimate.p_hat);
        }
        ChartSpec chart{"Simulated cheat frequency", "interruption step m", "fraction of trials"};
        emit_svg(o, render_line_chart(series, chart));
    }
}

void run_figure(const Scenario& s, int threads, const Outputs& o, std::ostream& out) {
    if (s.figure == "scaling") {
        run_scaling(s, threads, o, out);
        return;
    }
    std::vector<Row> rows;
    std::vector<Series> series;
    for (int four_n : s.grid) {
        Scenario one = s;
        one.n = four_n / 4;
        const CheatAssessment a = analyze_assessment(one, threads);
        const auto part = curve_rows(one, a);
        rows.insert(rows.end(), part.begin(), part.end());
        series.push_back({fmt::format("4N = {}", four_n), curve_points(a)});
    }
    emit_csv(o, table(kCsvHeader, rows), out);
    ChartSpec chart{curve_title(s), "interruption step m", "expected cheat probability"};
    emit_svg(o, render_line_chart(series, chart));
}

}  // namespace

std::string format_real(double v) {
    if (v == 0.0) {
        // No "-0".
        return "0";
    }
    return fmt::format("{:.12g}", v);
}

std::string csv_line(const Row& r) {
    return fmt::format("{},{},{},{},{},{},{},{}", r.mode, r.four_n, r.m, format_real(r.f), format_real(r.alpha_lo),
                       format_real(r.alpha_hi), format_real(r.kappa), format_real(r.value));
}

std::string csv_line(const SimulationRow& r) {
    return fmt::format("{},{},{},{},{},{}", csv_line(r.row), r.quantity, format_real(r.estimate.std_error),
                       format_real(r.estimate.ci95_lo), format_real(r.estimate.ci95_hi), r.estimate.trials);
}

std::vector<Row> analyze_rows(const Scenario& s, int threads) {
    s.validate();
    return curve_rows(s, analyze_assessment(s, threads));
}

std::vector<Row> search_rows(const Scenario& s, int threads) {
    s.validate();
    std::vector<Row> rows;
    for (int four_n : s.grid) {
        const CheatAssessment a = assess(s, four_n / 4, threads);
        Row r = base_row(s, four_n);
        r.m = a.best_m;
        r.f = a.best_f;
        r.value = a.value;
        rows.push_back(r);
    }
    return rows;
}

std::vector<SimulationRow> simulate_rows(const Scenario& s, int threads) {
    s.validate();
    std::vector<montecarlo::ExperimentSpec> specs;
    std::vector<int> steps = s.steps;
    if (steps.empty()) {
        steps.push_back(-1);
    }
    for (int m : steps) {
        for (double fb : s.flips_b) {
            montecarlo::ExperimentSpec spec;
            spec.cfg = s.protocol_config();
            spec.strategy_a = protocol::ClientStrategy::flipping(s.flip_a);
            spec.strategy_b = protocol::ClientStrategy::flipping(fb);
            spec.interrupt = m < 0 ? montecarlo::Interrupt::none() : montecarlo::Interrupt::at(m);
            spec.trials = s.trials;
            // Every experiment gets its own stream family.
            spec.master_seed = derive_seed(s.seed, specs.size());
            spec.alpha = s.alpha;
            specs.push_back(spec);
        }
    }
    const auto summaries = montecarlo::sweep(specs, threads);
    std::vector<SimulationRow> rows;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& spec = specs[i];
        const auto& sum = summaries[i];
        Row base;
        base.mode = "simulate";
        base.four_n = spec.cfg.rounds();
        base.m = spec.interrupt.kind == montecarlo::Interrupt::Kind::None ? spec.cfg.rounds() : spec.interrupt.step;
        base.f = spec.strategy_b.flip;
        base.alpha_lo = s.alpha ? *s.alpha : s.alpha_lo;
        base.alpha_hi = s.alpha ? *s.alpha : s.alpha_hi;
        base.kappa = s.kappa;
        const std::pair<const char*, montecarlo::Estimate> parts[] = {
            {"reach", sum.reach()},
            {"bind_alice", sum.bind(protocol::Party::Alice)},
            {"bind_bob", sum.bind(protocol::Party::Bob)},
            {"cheat", sum.cheat()},
        };
        for (const auto& [name, est] : parts) {
            Row r = base;
            r.value = est.p_hat;
            rows.push_back({r, name, est});
        }
    }
    return rows;
}

MaxEvaluator search_evaluator(const Scenario& s, int threads) {
    return [s, threads](int four_n) { return assess(s, four_n / 4, threads).value; };
}

ScalingReport scaling_report(const std::vector<int>& grid, const MaxEvaluator& evaluate) {
    ScalingReport rep;
    for (int four_n : grid) {
        rep.points.emplace_back(four_n / 4, evaluate(four_n));
    }
    rep.fit = analysis::scaling_slope(rep.points);
    return rep;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analysis and simulation of quantum contract signing with a trusted third party", "qcsign"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string format = "csv";
    int threads = 0;
    std::uint64_t seed = 0;

    const std::vector<std::pair<std::string, std::string>> verbs{
        {"analyze", "expected cheat probability against the interruption step"},
        {"simulate", "Monte Carlo estimates from full protocol runs"},
        {"search", "maximal expected cheat probability for each 4N in the grid"},
        {"scaling", "log-log slope of the maximal cheat probability against N"},
        {"figure", "curves or scaling chart as SVG"},
    };
    for (const auto& [name, help] : verbs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", scenario_path, "scenario file (key = value lines)");
        sub->add_option("--set", overrides, "override a scenario key, KEY=VALUE")->allow_extra_args(false);
        sub->add_option("--out", out_path, "output path (CSV, or SVG with --format svg)");
        sub->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}));
        sub->add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", seed, "master seed for simulate");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    if (verb == "figure" && sub->count("--format") == 0) {
        format = "both";
    }
    try {
        Scenario s = scenario_path.empty() ? Scenario{} : load_scenario(scenario_path);
        for (const std::string& o : overrides) {
            apply_override(s, o);
        }
        if (sub->count("--seed") > 0) {
            s.seed = seed;
        }
        s.validate();

        Outputs o;
        o.format = format == "svg" ? Format::Svg : format == "both" ? Format::Both : Format::Csv;
        o.path = out_path;
        if (o.svg() && o.path.empty()) {
            throw ConfigError("--format " + format + " needs --out");
        }
        const int workers = resolve_threads(threads);

        if (verb == "analyze") {
            run_analyze(s, workers, o, out);
        } else if (verb == "search") {
            run_search(s, workers, o, out);
        } else if (verb == "scaling") {
            run_scaling(s, workers, o, out);
        } else if (verb == "simulate") {
            run_simulate(s, workers, o, out);
        } else {
            run_figure(s, workers, o, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Usage);
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::Numeric);
    }
    return static_cast<int>(ExitCode::Ok);
}

}  // namespace qcs::cli
