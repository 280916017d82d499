#pragma once

#include "thzcov/hitting.hpp"
#include "thzcov/scenario.hpp"

namespace thzcov {

struct RegionBounds {
    double inner = 0.0;          // nearest distance inside the user's vertical main lobe
    double outer = kUnbounded;   // farthest distance inside it
    double serving_elevation = 0.0;
};

struct DominantRegions {
    double serving_distance = 0.0;
    RegionBounds bounds;
    // Boundary distances indexed [ap lobe][ue lobe]; kUnbounded when the SNR alone fails.
    std::array<std::array<double, 2>, 2> boundary{};
    bool snr_infeasible = false;
    // Clipped region edges named [ue lobe][interferer lobe]; suffix 1 lies below the
    // user's vertical main lobe, suffix 2 above it.
    double v_mm = 0.0;
    double v_ms = 0.0;
    double v_sm1 = 0.0;
    double v_sm2 = 0.0;
    double v_ss1 = 0.0;
    double v_ss2 = 0.0;
    // Angular widths of the user's main-lobe sector and of the remaining visible sector.
    double main_sector = 0.0;
    double side_sector = 0.0;

    double D(Lobe ap, Lobe ue) const {
        return boundary[static_cast<int>(ap)][static_cast<int>(ue)];
    }
};

// How the vertical hitting factor enters the far-interferer integral.
enum class FarProfile {
    Quadrature,        // wall-conditioned association, integrated numerically
    OpenOfficeClosed,  // unconditioned association, exponential-integral closed form
    Flat,              // planar baseline: vertical factor fixed to one
};

// Everything the interferer-count formulas need for one environment.
struct InterferenceContext {
    LinkBudget link;
    double height_gap = 0.0;
    double ap_density = 0.0;
    double los_scale = 1.0;   // LoS probability of an interfering link at zero distance
    double los_decay = 0.0;   // its exponential decay rate per meter
    double ue_beam_horizontal = 0.0;
    double ue_beam_vertical = 0.0;
    double self_block_angle = 0.0;
    HittingModel hitting;
    FarProfile profile = FarProfile::Quadrature;

    static InterferenceContext make(const Scenario& s, Environment env);
    static InterferenceContext make(const Scenario& s, const DerivedParams& d, Environment env);
    // Planar baseline: blockers lengthen every link by r_B, vertical hitting is ignored.
    static InterferenceContext make_planar(const Scenario& s, double blocker_radius);
};

RegionBounds region_bounds(double serving_distance, double ue_beam_vertical, double height_gap);

DominantRegions dominant_regions(double serving_distance, const InterferenceContext& ctx);
DominantRegions dominant_regions(double serving_distance, const Scenario& s);

double near_count(const DominantRegions& r, const InterferenceContext& ctx);
double far_count(const DominantRegions& r, const InterferenceContext& ctx);

// \int_a^b p_V(x) e^{-decay x} x dx for the context's profile.
double far_integral(double a, double b, const InterferenceContext& ctx);
double digamma_integral(double a, double b, const HittingModel& m, double decay);
double digamma_integral(double a, double b, const Scenario& s);
double digamma_open_office(double a, double b, const HittingModel& m, double decay);
double digamma_open_office(double a, double b, const Scenario& s);

double lambda_near(double serving_distance, const Scenario& s);
double lambda_far(double serving_distance, const Scenario& s);
double lambda_near_open_office(double serving_distance, const Scenario& s);
double lambda_far_open_office(double serving_distance, const Scenario& s);

}  // namespace thzcov
