#include "thzcov/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "thzcov/hitting.hpp"
#include "thzcov/montecarlo.hpp"
#include "thzcov/specfun.hpp"

namespace thzcov::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kHittingVariable = "x_i0";

std::string format_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", v);
    return buffer;
}

void exact_db_gains(Scenario& s) {
    s.ap.main_gain = db_to_linear(25.0);
    s.ap.side_gain = db_to_linear(-10.0);
    s.ue.main_gain = db_to_linear(15.0);
    s.ue.side_gain = db_to_linear(-10.0);
}

Series threshold_series(const std::string& label, double tau_db,
                        std::optional<Environment> env = std::nullopt) {
    return {label, [tau_db](Scenario& s) { s.propagation.sinr_threshold = db_to_linear(tau_db); },
            env};
}

std::vector<Series> density_series(const std::string& key, std::vector<double> values,
                                   void (*set)(Scenario&, double)) {
    std::vector<Series> out;
    for (double v : values) {
        out.push_back({key + "=" + format_value(v), [set, v](Scenario& s) { set(s, v); }, std::nullopt});
    }
    return out;
}

std::vector<Preset> make_presets() {
    std::vector<Preset> p;
    p.push_back({"fig5", "hitting probability vs interferer distance, R_T = 12.2 m",
                 Quantity::Hitting, kHittingVariable, Grid{1.0, 30.0, 1.0}, 6.0,
                 Environment::TypicalIndoor,
                 [](Scenario& s) {
                     exact_db_gains(s);
                     s.propagation.association_radius_override = 12.2;
                 },
                 {}, false});
    p.push_back({"fig6", "hitting probability for tau = 0/3/6 dB and the open office",
                 Quantity::Hitting, kHittingVariable, Grid{1.0, 30.0, 1.0}, 6.0,
                 Environment::TypicalIndoor, exact_db_gains,
                 {threshold_series("indoor-tau=0", 0.0), threshold_series("indoor-tau=3", 3.0),
                  threshold_series("indoor-tau=6", 6.0),
                  threshold_series("open-office-tau=3", 3.0, Environment::OpenOffice)},
                 false});
    p.push_back({"fig7-indoor", "coverage vs serving distance, typical indoor", Quantity::Coverage,
                 "x00", Grid{1.0, 12.0, 0.5}, 6.0, Environment::TypicalIndoor, {}, {}, false});
    p.push_back({"fig7-open", "coverage vs serving distance, open office", Quantity::Coverage,
                 "x00", Grid{1.0, 12.0, 0.5}, 6.0, Environment::OpenOffice, {}, {}, false});
    p.push_back({"fig7-2d", "2D-baseline coverage vs serving distance", Quantity::PlanarCoverage,
                 "x00", Grid{1.0, 12.0, 0.5}, 6.0, Environment::TypicalIndoor, {}, {}, false});
    p.push_back({"fig8", "coverage vs SINR threshold at x00 = 6 m for three blocker densities",
                 Quantity::Coverage, "tau_db", Grid{0.0, 6.0, 0.5}, 6.0,
                 Environment::TypicalIndoor, {},
                 density_series("lambda_b", {0.05, 0.1, 0.2},
                                [](Scenario& s, double v) { s.blockage.blocker_density = v; }),
                 false});
    std::vector<Series> splits;
    for (double shift : {-5.0, 0.0, 5.0}) {
        splits.push_back({"ap_shift_db=" + format_value(shift),
                          [shift](Scenario& s) { s = apply_gain_split(s, shift); }, std::nullopt});
    }
    p.push_back({"fig9", "coverage vs serving distance with main-lobe gain moved between UE and AP",
                 Quantity::Coverage, "x00", Grid{1.0, 12.0, 0.5}, 6.0, Environment::TypicalIndoor,
                 {}, splits, false});
    p.push_back({"fig10", "coverage vs carrier frequency for three AP densities (needs --k-table)",
                 Quantity::Coverage, "f_thz", std::nullopt, 6.0, Environment::TypicalIndoor, {},
                 density_series("lambda_a", {0.05, 0.1, 0.2},
                                [](Scenario& s, double v) { s.network.ap_density = v; }),
                 true});
    return p;
}

// Everything a run depends on; serialized verbatim into the manifest.
struct Request {
    std::string command;
    std::optional<std::string> preset;
    std::optional<std::string> sweep;
    std::optional<double> serving_distance;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    std::optional<double> tolerance;
    std::optional<std::string> environment;
    std::optional<std::string> out;
    unsigned threads = 0;
    std::string scenario_text;              // serialized scenario, absorption table excluded
    std::optional<AbsorptionTable> table;
};

struct Plan {
    Scenario base;
    Quantity quantity = Quantity::Coverage;
    std::string variable = "x00";
    std::vector<double> grid;
    double serving_distance = 6.0;
    Environment environment = Environment::TypicalIndoor;
    std::vector<Series> series;
    bool labeled = false;
};

Scenario scenario_of(const Request& r) {
    Scenario s = load_scenario(r.scenario_text);
    if (r.table) s.propagation.absorption_table = r.table;
    s.validate();
    return s;
}

std::string without_table_line(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string out;
    while (std::getline(in, line)) {
        if (line.rfind("k_abs_table", 0) == 0) continue;
        out += line + '\n';
    }
    return out;
}

Plan make_plan(const Request& r) {
    Plan plan;
    plan.base = scenario_of(r);
    const Preset* preset = nullptr;
    if (r.preset) {
        preset = find_preset(*r.preset);
        if (!preset) throw ConfigError("unknown preset '" + *r.preset + "' (see preset-list)");
        if (preset->needs_absorption_table && !plan.base.propagation.absorption_table) {
            throw ConfigError("preset " + preset->name + " needs --k-table");
        }
        if (preset->setup) preset->setup(plan.base);
        plan.quantity = preset->quantity;
        plan.variable = preset->variable;
        plan.serving_distance = preset->serving_distance;
        plan.environment = preset->environment;
        plan.series = preset->series;
        if (preset->grid) {
            plan.grid = preset->grid->values();
        } else {
            const auto& points = plan.base.propagation.absorption_table->points;
            const double low = points.front().first / 1e12;
            const double high = points.back().first / 1e12;
            plan.grid = high > low ? Grid{low, high, (high - low) / 20.0}.values()
                                   : std::vector<double>{low};
        }
    }
    if (r.environment) plan.environment = parse_environment(*r.environment);
    if (r.serving_distance) plan.serving_distance = *r.serving_distance;
    if (r.sweep) {
        auto [variable, grid] = parse_sweep(*r.sweep);
        if (variable == kHittingVariable) {
            plan.quantity = Quantity::Hitting;
        } else {
            parse_sweep_variable(variable);
            if (plan.quantity == Quantity::Hitting) plan.quantity = Quantity::Coverage;
        }
        plan.variable = variable;
        plan.grid = grid.values();
    } else if (!preset) {
        plan.grid = {plan.serving_distance};
    }
    if (plan.serving_distance < 0.0) throw ConfigError("--x00 must be nonnegative");
    plan.labeled = !plan.series.empty();
    if (plan.series.empty()) plan.series.push_back({"", {}, std::nullopt});
    std::sort(plan.grid.begin(), plan.grid.end());
    return plan;
}

struct Row {
    std::string series;
    double value = 0.0;
    std::vector<double> analytic;
    std::optional<Estimate> simulated;
    double reference_3d = 0.0;  // planar runs only
};

std::vector<std::string> analytic_columns(Quantity q) {
    if (q == Quantity::Hitting) return {"hitting_prob", "hitting_prob_2d"};
    return {"p_c", "p_c_los", "lambda_near", "lambda_far"};
}

struct PointSetup {
    Scenario scenario;
    double serving_distance = 0.0;
    double hitting_distance = 0.0;
};

PointSetup point_setup(const Plan& plan, const Scenario& series_base, double value) {
    if (plan.variable == kHittingVariable) {
        if (value < 0.0) throw ConfigError("interferer distance must be nonnegative");
        return {series_base, plan.serving_distance, value};
    }
    const SweepPoint p =
        apply_sweep(series_base, plan.serving_distance, parse_sweep_variable(plan.variable), value);
    return {p.scenario, p.serving_distance, 0.0};
}

std::vector<Row> evaluate(const Plan& plan, const Request& r, bool analytic, bool simulate) {
    std::vector<Row> rows;
    for (std::size_t si = 0; si < plan.series.size(); ++si) {
        const Series& series = plan.series[si];
        Scenario base = plan.base;
        if (series.adjust) series.adjust(base);
        base.validate();
        const Environment env = series.environment.value_or(plan.environment);
        for (std::size_t pi = 0; pi < plan.grid.size(); ++pi) {
            const double value = plan.grid[pi];
            const PointSetup p = point_setup(plan, base, value);
            Row row{series.label, value, {}, std::nullopt, 0.0};
            if (analytic || plan.quantity == Quantity::PlanarCoverage) {
                switch (plan.quantity) {
                    case Quantity::Hitting: {
                        const HittingModel m =
                            HittingModel::from(p.scenario, derive_constants(p.scenario, env), env);
                        row.analytic = {m.probability(p.hitting_distance), m.horizontal()};
                        break;
                    }
                    case Quantity::Coverage:
                    case Quantity::PlanarCoverage: {
                        const CoverageResult c =
                            plan.quantity == Quantity::Coverage
                                ? coverage(p.serving_distance, p.scenario, env)
                                : coverage_2d_baseline(p.serving_distance, p.scenario,
                                                       p.scenario.blockage.planar_blocker_radius);
                        row.analytic = {c.p_c, c.p_c_los, c.lambda_near, c.lambda_far};
                        if (plan.quantity == Quantity::PlanarCoverage) {
                            row.reference_3d = coverage(p.serving_distance, p.scenario, env).p_c;
                        }
                        break;
                    }
                }
            }
            if (simulate) {
                const std::uint64_t point_seed =
                    mc::trial_seed(r.seed, (static_cast<std::uint64_t>(si) << 32) | pi);
                const mc::Simulator sim(p.scenario, env);
                row.simulated =
                    plan.quantity == Quantity::Hitting
                        ? sim.estimate_hitting(p.hitting_distance, r.trials, point_seed, r.threads)
                        : sim.estimate_coverage(p.serving_distance, r.trials, point_seed, r.threads);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

struct Report {
    std::string csv;
    std::string summary;
    int exit_code = kOk;
};

Report render(const Plan& plan, const Request& r, const std::vector<Row>& rows) {
    const bool analytic = r.command != "simulate";
    const bool simulate = r.command != "analyze";
    const bool compare = r.command == "compare";
    std::ostringstream csv;
    std::vector<std::string> header;
    if (plan.labeled) header.push_back("series");
    header.push_back("sweep_value");
    if (analytic) {
        for (auto& c : analytic_columns(plan.quantity)) header.push_back(c);
    }
    if (simulate) {
        for (const char* c : {"mc_mean", "mc_ci95", "trials", "rejected_associations"}) header.push_back(c);
    }
    if (compare) {
        header.push_back("abs_error");
        if (plan.quantity == Quantity::PlanarCoverage) header.push_back("p_c_3d");
    }
    for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
    csv << '\n';

    double max_error = 0.0;
    bool planar_below = true;
    for (const Row& row : rows) {
        std::vector<std::string> cells;
        if (plan.labeled) cells.push_back(row.series);
        cells.push_back(format_value(row.value));
        if (analytic) {
            for (double v : row.analytic) cells.push_back(format_value(v));
        }
        if (simulate) {
            cells.push_back(format_value(row.simulated->mean));
            cells.push_back(format_value(row.simulated->half_width));
            cells.push_back(std::to_string(row.simulated->trials));
            cells.push_back(std::to_string(row.simulated->rejected_associations));
        }
        if (compare) {
            const double error = std::abs(row.analytic.front() - row.simulated->mean);
            max_error = std::max(max_error, error);
            cells.push_back(format_value(error));
            if (plan.quantity == Quantity::PlanarCoverage) {
                cells.push_back(format_value(row.reference_3d));
                planar_below = planar_below && row.analytic.front() <= row.reference_3d;
            }
        }
        for (std::size_t i = 0; i < cells.size(); ++i) csv << (i ? "," : "") << cells[i];
        csv << '\n';
    }

    Report report{csv.str(), "", kOk};
    if (compare) {
        std::ostringstream s;
        s << "summary: max_abs_error=" << format_value(max_error);
        if (r.tolerance) {
            const bool pass = max_error <= *r.tolerance;
            s << " tolerance=" << format_value(*r.tolerance) << " result=" << (pass ? "pass" : "fail");
            if (!pass) report.exit_code = kToleranceExceeded;
        }
        if (plan.quantity == Quantity::PlanarCoverage) {
            s << " ordering_2d_le_3d=" << (planar_below ? "true" : "false");
        }
        report.summary = s.str();
    }
    return report;
}

Json request_to_json(const Request& r) {
    Json j;
    j["command"] = r.command;
    j["preset"] = r.preset ? Json(*r.preset) : Json(nullptr);
    j["sweep"] = r.sweep ? Json(*r.sweep) : Json(nullptr);
    j["x00"] = r.serving_distance ? Json(*r.serving_distance) : Json(nullptr);
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["tolerance"] = r.tolerance ? Json(*r.tolerance) : Json(nullptr);
    j["env"] = r.environment ? Json(*r.environment) : Json(nullptr);
    j["threads"] = r.threads;
    j["scenario"] = r.scenario_text;
    if (r.table) {
        Json points = Json::array();
        for (const auto& [f, k] : r.table->points) points.push_back({f, k});
        j["k_table"] = {{"source", r.table->source}, {"points", points}};
    } else {
        j["k_table"] = nullptr;
    }
    return j;
}

template <class T>
std::optional<T> optional_field(const Json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

Request request_from_json(const Json& j) {
    Request r;
    r.command = j.at("command").get<std::string>();
    r.preset = optional_field<std::string>(j, "preset");
    r.sweep = optional_field<std::string>(j, "sweep");
    r.serving_distance = optional_field<double>(j, "x00");
    r.trials = j.at("trials").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tolerance = optional_field<double>(j, "tolerance");
    r.environment = optional_field<std::string>(j, "env");
    r.threads = j.value("threads", 0u);
    r.scenario_text = j.at("scenario").get<std::string>();
    if (j.contains("k_table") && !j["k_table"].is_null()) {
        AbsorptionTable table;
        table.source = j["k_table"].at("source").get<std::string>();
        for (const auto& p : j["k_table"].at("points")) {
            table.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        }
        r.table = table;
    }
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write '" + path + "'");
    file << content;
    if (!file) throw ConfigError("failed writing '" + path + "'");
}

int execute(const Request& r, const std::vector<std::string>& argv, std::ostream& out,
            std::ostream& err) {
    if (r.command != "analyze" && r.trials == 0) throw ConfigError("--trials must be at least 1");
    const auto started = std::chrono::steady_clock::now();
    const Plan plan = make_plan(r);
    const bool analytic = r.command != "simulate";
    const bool simulate = r.command != "analyze";
    const Report report = render(plan, r, evaluate(plan, r, analytic, simulate));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (r.out) {
        write_file(*r.out, report.csv);
        Json manifest = request_to_json(r);
        manifest["tool"] = "thzcov";
        manifest["version"] = kVersion;
        manifest["argv"] = argv;
        manifest["output"] = *r.out;
        manifest["summary"] = report.summary;
        manifest["duration_seconds"] = seconds;
        write_file(*r.out + ".manifest.json", manifest.dump(2) + '\n');
    } else {
        out << report.csv;
    }
    if (!report.summary.empty()) err << report.summary << '\n';
    return report.exit_code;
}

}  // namespace

std::vector<double> Grid::values() const {
    if (!(step > 0.0) || !std::isfinite(low) || !std::isfinite(high) || high < low) {
        throw ConfigError("sweep grid needs lo <= hi and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((high - low) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("sweep grid has too many points");
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(low + static_cast<double>(i) * step);
    return out;
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = make_presets();
    return all;
}

const Preset* find_preset(const std::string& name) {
    for (const Preset& p : presets()) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

std::pair<std::string, Grid> parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--sweep expects var=lo:hi:step");
    const std::string variable = text.substr(0, eq);
    std::vector<double> parts;
    std::stringstream rest(text.substr(eq + 1));
    std::string item;
    while (std::getline(rest, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--sweep: '" + item + "' is not a number");
        }
    }
    if (parts.size() != 3) throw ConfigError("--sweep expects var=lo:hi:step");
    const Grid grid{parts[0], parts[1], parts[2]};
    grid.values();
    return {variable, grid};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Indoor terahertz coverage: analysis, simulation and cross-validation", "thzcov"};
    app.require_subcommand(1);
    Request r;
    std::optional<std::string> config_path;
    std::optional<std::string> table_path;
    std::string manifest_path;

    const auto add_run_options = [&](CLI::App* cmd, bool with_mc, bool with_tolerance) {
        cmd->add_option("--config", config_path, "scenario file (key = value lines)");
        cmd->add_option("--preset", r.preset, "named experiment, see preset-list");
        cmd->add_option("--sweep", r.sweep, "var=lo:hi:step with var in x00, tau_db, f_thz, "
                                            "lambda_a, lambda_b, gain_split_db, x_i0");
        cmd->add_option("--x00", r.serving_distance, "serving distance in meters (default 6)");
        cmd->add_option("--k-table", table_path, "CSV of frequency_hz,K_per_m");
        cmd->add_option("--env", r.environment, "indoor or open-office");
        cmd->add_option("--out", r.out, "CSV path; a manifest is written next to it");
        if (with_mc) {
            cmd->add_option("--trials", r.trials, "Monte Carlo trials per point");
            cmd->add_option("--seed", r.seed, "master seed");
            cmd->add_option("--threads", r.threads, "worker threads (0 = all cores)");
        }
        if (with_tolerance) cmd->add_option("--tolerance", r.tolerance, "max |analytic - MC|");
    };
    auto* analyze = app.add_subcommand("analyze", "analytic curve");
    add_run_options(analyze, false, false);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo curve");
    add_run_options(simulate, true, false);
    auto* compare = app.add_subcommand("compare", "analytic and Monte Carlo side by side");
    add_run_options(compare, true, true);
    auto* list = app.add_subcommand("preset-list", "list named experiments");
    auto* replay = app.add_subcommand("replay", "re-run the request recorded in a manifest");
    replay->add_option("manifest", manifest_path, "manifest JSON")->required();
    replay->add_option("--out", r.out, "CSV path; stdout when absent");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (list->parsed()) {
            for (const Preset& p : presets()) out << p.name << '\t' << p.description << '\n';
            return kOk;
        }
        if (replay->parsed()) {
            std::ifstream in(manifest_path);
            if (!in) throw ConfigError("cannot open manifest '" + manifest_path + "'");
            Json manifest;
            try {
                manifest = Json::parse(in);
            } catch (const Json::exception& e) {
                throw ConfigError(std::string("malformed manifest: ") + e.what());
            }
            const std::optional<std::string> target = r.out;
            try {
                r = request_from_json(manifest);
            } catch (const Json::exception& e) {
                throw ConfigError(std::string("malformed manifest: ") + e.what());
            }
            r.out = target;
            return execute(r, args, out, err);
        }
        for (auto* cmd : {analyze, simulate, compare}) {
            if (cmd->parsed()) r.command = cmd->get_name();
        }
        Scenario s = config_path ? load_scenario_file(*config_path) : load_scenario("");
        if (table_path) {
            s.propagation.absorption_table = AbsorptionTable::load(*table_path);
            s.propagation.absorption_table->source = *table_path;
        }
        r.scenario_text = without_table_line(serialize(s));
        r.table = s.propagation.absorption_table;
        return execute(r, args, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const specfun::DomainError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumericError;
    } catch (const std::exception& e) {
        err << "numeric error: " << e.what() << '\n';
        return kNumericError;
    }
}

}  // namespace thzcov::cli
