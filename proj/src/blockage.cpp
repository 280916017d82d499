#include "thzcov/blockage.hpp"

#include <cmath>
#include <numbers>

namespace thzcov {

LosModel LosModel::from(const Scenario& s, const DerivedParams& d) {
    LosModel m;
    m.human_clear_scale = d.human_clear_scale;
    m.human_decay = d.human_decay;
    m.wall_decay = d.wall_decay;
    m.decay = d.decay;
    m.association_normalizer = d.association_normalizer;
    m.association_radius = d.association_radius;
    m.blocker_area = s.blockage.blocker_length * s.blockage.blocker_width;
    m.blocker_perimeter_half = s.blockage.blocker_length + s.blockage.blocker_width;
    m.blocker_density = s.blockage.blocker_density;
    m.blocking_fraction =
        (s.blockage.blocker_height - s.network.ue_height) / s.height_gap();
    return m;
}

double LosModel::p_los_human(double x) const {
    return human_clear_scale * std::exp(-human_decay * x);
}

double LosModel::mean_intersecting_humans(double x) const {
    const double shadow = blocking_fraction * x;
    return (blocker_area + 2.0 / std::numbers::pi * blocker_perimeter_half * shadow) *
           blocker_density;
}

double LosModel::p_los_wall(double x) const { return std::exp(-wall_decay * x); }

double LosModel::p_los(double x) const { return human_clear_scale * std::exp(-decay * x); }

double LosModel::assoc_distance_pdf(double x) const {
    if (x < 0.0 || x > association_radius) return 0.0;
    return association_normalizer * x * std::exp(-wall_decay * x);
}

namespace detail {
double p_los_wall_at_azimuth(double wall_density, double wall_mean_length, double azimuth,
                             double x) {
    const double crossing = (std::abs(std::sin(azimuth)) + std::abs(std::cos(azimuth))) / 2.0;
    return std::exp(-wall_density * wall_mean_length * crossing * x);
}
}  // namespace detail

}  // namespace thzcov
