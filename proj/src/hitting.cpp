#include "thzcov/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thzcov/specfun.hpp"

namespace thzcov {

using std::numbers::pi;

double association_normalizer(double wall_decay, double radius) {
    // xexp_integral(decay, 0, R) = (1 - e^{-decay R}(1 + decay R)) / decay^2, stable as decay -> 0.
    return 1.0 / specfun::xexp_integral(wall_decay, 0.0, radius);
}

double distance_below(double x, double half_angle, double gap) {
    const double t = std::tan(half_angle);
    if (!(x > gap * t)) return 0.0;
    return gap * (x - gap * t) / (gap + x * t);
}

double distance_above(double x, double half_angle, double gap) {
    const double t = std::tan(half_angle);
    if (!(x * t < gap)) return kUnbounded;
    return gap * (x + gap * t) / (gap - x * t);
}

HittingModel::HittingModel(double ap_beam_horizontal, double ap_beam_vertical, double height_gap,
                           double association_radius, double wall_decay, Environment env)
    : beam_h_(ap_beam_horizontal),
      beam_v_(ap_beam_vertical),
      gap_(height_gap),
      radius_(association_radius),
      wall_decay_(env == Environment::OpenOffice ? 0.0 : wall_decay),
      env_(env) {
    if (!(radius_ > 0.0) || !(gap_ > 0.0)) {
        throw specfun::DomainError("hitting model needs positive association radius and height gap");
    }
    normalizer_ = association_normalizer(wall_decay_, radius_);
    association_elevation_ = std::atan2(gap_, radius_);
    onset_ = distance_below(radius_, beam_v_ / 2.0, gap_);
    cutoff_ = distance_above(radius_, beam_v_ / 2.0, gap_);
    zenith_edge_ = gap_ * std::tan(beam_v_ / 2.0);
}

HittingModel HittingModel::from(const Scenario& s, const DerivedParams& d, Environment env) {
    return HittingModel(s.ap.beam_horizontal, s.ap.beam_vertical, d.height_gap,
                        d.association_radius, d.wall_decay, env);
}

HittingModel::Window HittingModel::window(double distance) const {
    Window w;
    if (distance <= onset_) {
        w.branch = Branch::Near;
    } else if (distance < cutoff_) {
        w.branch = Branch::Mid;
    } else {
        return w;
    }
    w.upper_at_zenith = distance <= zenith_edge_;
    w.inner = w.upper_at_zenith ? 0.0 : distance_below(distance, beam_v_ / 2.0, gap_);
    w.outer = w.branch == Branch::Near
                  ? std::min(radius_, distance_above(distance, beam_v_ / 2.0, gap_))
                  : radius_;
    w.inner = std::min(w.inner, w.outer);
    return w;
}

double HittingModel::horizontal() const { return beam_h_ / (2.0 * pi); }

double HittingModel::vertical(double distance) const {
    const Window w = window(distance);
    double value = 0.0;
    if (env_ == Environment::OpenOffice) {
        const double r2 = radius_ * radius_;
        switch (w.branch) {
            case Branch::Near: value = (w.outer * w.outer - w.inner * w.inner) / r2; break;
            case Branch::Mid: value = 1.0 - w.inner * w.inner / r2; break;
            case Branch::Beyond: value = 0.0; break;
        }
    } else if (w.branch != Branch::Beyond) {
        value = normalizer_ * specfun::xexp_integral(wall_decay_, w.inner, w.outer);
    }
    return std::clamp(value, 0.0, 1.0);
}

double HittingModel::elevation_pdf(double elevation) const {
    if (elevation < association_elevation_ || elevation > pi / 2.0) return 0.0;
    const double s = std::sin(elevation);
    const double cot = std::cos(elevation) / s;
    return normalizer_ * gap_ * gap_ * cot / (s * s) * std::exp(-wall_decay_ * gap_ * cot);
}

double hitting_prob_horizontal(const HittingModel& m) { return m.horizontal(); }
double hitting_prob_vertical(double distance, const HittingModel& m) { return m.vertical(distance); }
double hitting_prob(double distance, const HittingModel& m) { return m.probability(distance); }
double elevation_pdf(double elevation, const HittingModel& m) { return m.elevation_pdf(elevation); }

}  // namespace thzcov
