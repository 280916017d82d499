#include "thzcov/antenna.hpp"

#include <cmath>
#include <numbers>

#include "thzcov/specfun.hpp"

namespace thzcov {

using std::numbers::pi;

double wrap_angle(double angle) {
    double wrapped = std::remainder(angle, 2.0 * pi);
    if (wrapped <= -pi) wrapped += 2.0 * pi;
    return wrapped;
}

double main_lobe_solid_angle(double beam_horizontal, double beam_vertical) {
    if (!(beam_horizontal > 0.0 && beam_horizontal < pi && beam_vertical > 0.0 &&
          beam_vertical < pi)) {
        throw specfun::DomainError("beamwidths must lie in (0, pi)");
    }
    const double s = std::tan(beam_horizontal / 2.0) * std::tan(beam_vertical / 2.0);
    if (s > 1.0) {
        throw specfun::DomainError("beamwidth pair exceeds the pyramidal solid-angle domain");
    }
    return 4.0 * std::asin(s);
}

LobeGains sectored_gains(double side_lobe_ratio, double main_solid_angle) {
    if (!(side_lobe_ratio > 0.0 && side_lobe_ratio < 1.0)) {
        throw specfun::DomainError("side-lobe ratio must lie in (0, 1)");
    }
    if (!(main_solid_angle > 0.0 && main_solid_angle < 4.0 * pi)) {
        throw specfun::DomainError("main-lobe solid angle must lie in (0, 4 pi)");
    }
    const double k = side_lobe_ratio;
    return {4.0 * pi / ((k + 1.0) * main_solid_angle),
            4.0 * pi * k / ((k + 1.0) * (4.0 * pi - main_solid_angle))};
}

AntennaPattern AntennaPattern::from_beamwidths(double beam_horizontal, double beam_vertical,
                                               double side_lobe_ratio,
                                               std::optional<double> main_gain_override,
                                               std::optional<double> side_gain_override) {
    AntennaPattern p;
    p.beam_horizontal = beam_horizontal;
    p.beam_vertical = beam_vertical;
    p.side_lobe_ratio = side_lobe_ratio;
    p.main_solid_angle = main_lobe_solid_angle(beam_horizontal, beam_vertical);
    p.side_solid_angle = 4.0 * pi - p.main_solid_angle;
    const LobeGains computed = sectored_gains(side_lobe_ratio, p.main_solid_angle);
    p.main_gain = main_gain_override.value_or(computed.main);
    p.side_gain = side_gain_override.value_or(computed.side);
    return p;
}

bool in_main_lobe(const AntennaPattern& pattern, const Boresight& boresight,
                  const Boresight& direction) {
    return std::abs(wrap_angle(direction.azimuth - boresight.azimuth)) <=
               pattern.beam_horizontal / 2.0 &&
           std::abs(direction.elevation - boresight.elevation) <= pattern.beam_vertical / 2.0;
}

double gain_towards(const AntennaPattern& pattern, const Boresight& boresight,
                    const Boresight& direction) {
    return in_main_lobe(pattern, boresight, direction) ? pattern.main_gain : pattern.side_gain;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace thzcov
