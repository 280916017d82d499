#pragma once

#include "thzcov/scenario.hpp"

namespace thzcov {

// Line-of-sight probabilities over a horizontal link distance, and the law of the
// distance between an AP and the UE it serves.
struct LosModel {
    double human_clear_scale = 1.0;
    double human_decay = 0.0;
    double wall_decay = 0.0;
    double decay = 0.0;
    double association_normalizer = 0.0;
    double association_radius = 0.0;
    // Blocker footprint and height ratio, for the mean number of intersecting blockers.
    double blocker_area = 0.0;
    double blocker_perimeter_half = 0.0;  // w1 + w2
    double blocker_density = 0.0;
    double blocking_fraction = 0.0;       // (h_B - h_U) / (h_A - h_U)

    static LosModel from(const Scenario& s, const DerivedParams& d);

    double p_los_human(double x) const;
    double mean_intersecting_humans(double x) const;
    double p_los_wall(double x) const;
    double p_los(double x) const;
    double assoc_distance_pdf(double x) const;
};

namespace detail {
// Wall LoS for a fixed link azimuth; the orientation-averaged form replaces the
// azimuth factor (|sin| + |cos|)/2 by its mean 2/pi.
double p_los_wall_at_azimuth(double wall_density, double wall_mean_length, double azimuth,
                             double x);
}  // namespace detail

}  // namespace thzcov
