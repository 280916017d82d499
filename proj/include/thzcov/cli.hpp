#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "thzcov/coverage.hpp"
#include "thzcov/scenario.hpp"

namespace thzcov::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kToleranceExceeded = 4 };

inline constexpr const char* kVersion = "1.0.0";

// What a curve reports at each sweep value.
enum class Quantity {
    Coverage,        // analytic coverage of the configured environment
    PlanarCoverage,  // 2D baseline analysis, checked against the 3D simulator
    Hitting,         // main-lobe hitting probability versus interferer distance
};

struct Series {
    std::string label;
    std::function<void(Scenario&)> adjust;
    std::optional<Environment> environment;  // falls back to the run's environment
};

struct Grid {
    double low = 0.0;
    double high = 0.0;
    double step = 1.0;

    std::vector<double> values() const;
};

struct Preset {
    std::string name;
    std::string description;
    Quantity quantity = Quantity::Coverage;
    std::string variable;  // a sweep variable name, or "x_i0" for hitting curves
    std::optional<Grid> grid;  // empty when derived from the absorption table
    double serving_distance = 6.0;
    Environment environment = Environment::TypicalIndoor;
    std::function<void(Scenario&)> setup;
    std::vector<Series> series;  // empty for a single unlabeled curve
    bool needs_absorption_table = false;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name);

// Parses "var=lo:hi:step". Throws ConfigError.
std::pair<std::string, Grid> parse_sweep(const std::string& text);

// Full command-line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thzcov::cli
