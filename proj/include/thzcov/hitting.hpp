#pragma once

#include "thzcov/scenario.hpp"

namespace thzcov {

// Probability that an interfering AP's main lobe covers the typical user, given that the
// AP serves its own UE placed by the association law. Open-office behaviour is obtained
// with zero wall decay.
class HittingModel {
public:
    HittingModel(double ap_beam_horizontal, double ap_beam_vertical, double height_gap,
                 double association_radius, double wall_decay, Environment env);
    static HittingModel from(const Scenario& s, const DerivedParams& d, Environment env);

    // Which ends of the AP's vertical beam window are cut by the association support.
    // Ranges: near for x <= onset, mid for onset < x < cutoff, beyond for x >= cutoff.
    enum class Branch { Near, Mid, Beyond };
    struct Window {
        Branch branch = Branch::Beyond;
        bool upper_at_zenith = false;   // beam top passes the vertical
        double inner = 0.0;             // nearest covered UE distance
        double outer = 0.0;             // farthest covered UE distance
    };
    Window window(double distance) const;

    double horizontal() const;
    double vertical(double distance) const;
    double probability(double distance) const { return horizontal() * vertical(distance); }
    double elevation_pdf(double elevation) const;

    double onset() const { return onset_; }      // x_mu
    double cutoff() const { return cutoff_; }    // x_nu, may be infinite
    double zenith_edge() const { return zenith_edge_; }  // beam top is vertical for x <= this
    double normalizer() const { return normalizer_; }
    double association_elevation() const { return association_elevation_; }
    double association_radius() const { return radius_; }
    double height_gap() const { return gap_; }
    double beam_vertical() const { return beam_v_; }
    double wall_decay() const { return wall_decay_; }
    Environment environment() const { return env_; }

private:
    double beam_h_;
    double beam_v_;
    double gap_;
    double radius_;
    double wall_decay_;
    Environment env_;
    double normalizer_;
    double association_elevation_;
    double onset_;
    double cutoff_;
    double zenith_edge_;
};

// Normalizer of the wall-conditioned association distance density on [0, radius].
double association_normalizer(double wall_decay, double radius);

// Horizontal distances of the points seen at elevation atan(gap/x) -/+ half_angle.
// Return 0 (resp. infinity) when the tilted ray passes the vertical (resp. horizontal).
double distance_below(double x, double half_angle, double gap);  // elevation + half_angle
double distance_above(double x, double half_angle, double gap);  // elevation - half_angle

double hitting_prob_horizontal(const HittingModel& m);
double hitting_prob_vertical(double distance, const HittingModel& m);
double hitting_prob(double distance, const HittingModel& m);
double elevation_pdf(double elevation, const HittingModel& m);

}  // namespace thzcov
