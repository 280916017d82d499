#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "thzcov/dominant.hpp"
#include "thzcov/scenario.hpp"

namespace thzcov {

struct CoverageResult {
    double serving_distance = 0.0;
    double p_c = 0.0;
    double p_c_los = 0.0;
    double lambda_near = 0.0;
    double lambda_far = 0.0;
    Environment environment = Environment::TypicalIndoor;
    bool planar = false;
    bool snr_infeasible = false;
};

CoverageResult coverage(double serving_distance, const Scenario& s);
CoverageResult coverage_open_office(double serving_distance, const Scenario& s);
CoverageResult coverage(double serving_distance, const Scenario& s, Environment env);
CoverageResult coverage_2d_baseline(double serving_distance, const Scenario& s,
                                    double blocker_radius);

enum class SweepVariable { ServingDistance, ThresholdDb, FrequencyThz, ApDensity, BlockerDensity, GainSplitDb };

std::string_view to_string(SweepVariable v);
SweepVariable parse_sweep_variable(std::string_view name);

// Moves `shift_db` of main-lobe gain from the UE to the AP, keeping their product fixed.
// Horizontal beamwidths change to realise the new gains; side lobes follow from the side-lobe ratio.
Scenario apply_gain_split(const Scenario& s, double shift_db);

// Scenario and serving distance at one sweep value.
struct SweepPoint {
    Scenario scenario;
    double serving_distance = 0.0;
};
SweepPoint apply_sweep(const Scenario& base, double serving_distance, SweepVariable variable,
                       double value);

struct Estimate {
    double mean = 0.0;
    std::size_t trials = 0;
    double half_width = 0.0;
    std::size_t rejected_associations = 0;
};

struct CurvePoint {
    double value = 0.0;
    CoverageResult analytic;
    std::optional<Estimate> simulated;
};

struct Curve {
    SweepVariable variable = SweepVariable::ServingDistance;
    std::vector<CurvePoint> points;
};

using Estimator = std::function<Estimate(const Scenario&, double serving_distance, std::size_t index)>;

// Points are sorted by sweep value. The estimator, when given, runs once per point.
Curve sweep(SweepVariable variable, std::vector<double> grid, const Scenario& base,
            Environment env, double serving_distance, const Estimator& estimator = {});

}  // namespace thzcov
