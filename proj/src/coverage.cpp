#include "thzcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

namespace thzcov {

namespace {

using std::numbers::pi;

CoverageResult assemble(double serving_distance, const InterferenceContext& ctx,
                        double serving_los) {
    CoverageResult r;
    r.serving_distance = serving_distance;
    const DominantRegions regions = dominant_regions(serving_distance, ctx);
    if (regions.snr_infeasible) {
        r.snr_infeasible = true;
        r.lambda_near = r.lambda_far = kUnbounded;
        return r;
    }
    r.lambda_near = near_count(regions, ctx);
    r.lambda_far = far_count(regions, ctx);
    r.p_c_los = std::exp(-r.lambda_near - r.lambda_far);
    r.p_c = serving_los * r.p_c_los;
    return r;
}

// Widens or narrows the horizontal beam until the main-lobe gain is multiplied by `factor`.
// The vertical beam, and with it the elevation geometry, stays as configured.
// Explicit gain overrides have no beamwidth to move, so only the main gain changes.
void shift_main_gain(AntennaParams& a, double factor) {
    if (factor == 1.0) return;
    const AntennaPattern p = a.pattern();
    if (a.main_gain || a.side_gain) {
        a.side_gain = p.side_gain;
        a.main_gain = p.main_gain * factor;
        return;
    }
    const double target = p.main_solid_angle / factor;
    // The pyramid needs tan(H/2) tan(V/2) <= 1, i.e. H <= pi - V.
    const double widest = (pi - a.beam_vertical) * (1.0 - 1e-12);
    if (!(target < main_lobe_solid_angle(widest, a.beam_vertical))) {
        throw ConfigError("gain split needs a main lobe wider than the pyramid model allows");
    }
    const auto mismatch = [&](double width) {
        return width == 0.0 ? -target : main_lobe_solid_angle(width, a.beam_vertical) - target;
    };
    std::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(mismatch, 0.0, widest,
                                                           boost::math::tools::eps_tolerance<double>(52), iterations);
    a.beam_horizontal = 0.5 * (bracket.first + bracket.second);
}

}  // namespace

CoverageResult coverage(double serving_distance, const Scenario& s, Environment env) {
    const DerivedParams d = derive_constants(s, env);
    const InterferenceContext ctx = InterferenceContext::make(s, d, env);
    CoverageResult r = assemble(serving_distance, ctx,
                                d.human_clear_scale * std::exp(-d.human_decay * serving_distance));
    r.environment = env;
    return r;
}

CoverageResult coverage(double serving_distance, const Scenario& s) {
    return coverage(serving_distance, s, Environment::TypicalIndoor);
}

CoverageResult coverage_open_office(double serving_distance, const Scenario& s) {
    return coverage(serving_distance, s, Environment::OpenOffice);
}

CoverageResult coverage_2d_baseline(double serving_distance, const Scenario& s,
                                    double blocker_radius) {
    if (!(blocker_radius >= 0.0)) throw ConfigError("invalid scenario: requires r_B >= 0");
    const InterferenceContext ctx = InterferenceContext::make_planar(s, blocker_radius);
    const DerivedParams d = derive_constants(s, Environment::TypicalIndoor);
    const double planar_human_decay = ctx.los_decay - d.wall_decay;
    CoverageResult r = assemble(serving_distance, ctx,
                                ctx.los_scale * std::exp(-planar_human_decay * serving_distance));
    r.planar = true;
    return r;
}

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::ServingDistance: return "x00";
        case SweepVariable::ThresholdDb: return "tau_db";
        case SweepVariable::FrequencyThz: return "f_thz";
        case SweepVariable::ApDensity: return "lambda_a";
        case SweepVariable::BlockerDensity: return "lambda_b";
        case SweepVariable::GainSplitDb: return "gain_split_db";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view name) {
    for (SweepVariable v :
         {SweepVariable::ServingDistance, SweepVariable::ThresholdDb, SweepVariable::FrequencyThz,
          SweepVariable::ApDensity, SweepVariable::BlockerDensity, SweepVariable::GainSplitDb}) {
        if (to_string(v) == name) return v;
    }
    throw ConfigError("unknown sweep variable '" + std::string(name) + "'");
}

Scenario apply_gain_split(const Scenario& s, double shift_db) {
    Scenario out = s;
    shift_main_gain(out.ap, db_to_linear(shift_db));
    shift_main_gain(out.ue, db_to_linear(-shift_db));
    out.validate();
    return out;
}

SweepPoint apply_sweep(const Scenario& base, double serving_distance, SweepVariable variable,
                       double value) {
    SweepPoint p{base, serving_distance};
    switch (variable) {
        case SweepVariable::ServingDistance: p.serving_distance = value; break;
        case SweepVariable::ThresholdDb: p.scenario.propagation.sinr_threshold = db_to_linear(value); break;
        case SweepVariable::FrequencyThz:
            if (!base.propagation.absorption_table) {
                throw ConfigError("frequency sweeps need an absorption table (k_abs_table)");
            }
            p.scenario.propagation.frequency = value * 1e12;
            break;
        case SweepVariable::ApDensity: p.scenario.network.ap_density = value; break;
        case SweepVariable::BlockerDensity: p.scenario.blockage.blocker_density = value; break;
        case SweepVariable::GainSplitDb: p.scenario = apply_gain_split(base, value); break;
    }
    p.scenario.validate();
    return p;
}

Curve sweep(SweepVariable variable, std::vector<double> grid, const Scenario& base,
            Environment env, double serving_distance, const Estimator& estimator) {
    if (grid.empty()) throw ConfigError("sweep grid is empty");
    std::sort(grid.begin(), grid.end());
    Curve curve;
    curve.variable = variable;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SweepPoint p = apply_sweep(base, serving_distance, variable, grid[i]);
        CurvePoint point{grid[i], coverage(p.serving_distance, p.scenario, env), std::nullopt};
        if (estimator) point.simulated = estimator(p.scenario, p.serving_distance, i);
        curve.points.push_back(point);
    }
    return curve;
}

}  // namespace thzcov
