#pragma once

#include <optional>

namespace thzcov {

enum class Lobe { Main = 0, Side = 1 };

// Elevation is positive above the horizontal; APs point down, UEs point up.
struct Boresight {
    double azimuth = 0.0;
    double elevation = 0.0;
};

struct LobeGains {
    double main = 1.0;
    double side = 1.0;
};

// Pyramidal main lobe plus spherical side lobe.
struct AntennaPattern {
    double beam_horizontal = 0.0;
    double beam_vertical = 0.0;
    double side_lobe_ratio = 0.0;
    double main_solid_angle = 0.0;
    double side_solid_angle = 0.0;
    double main_gain = 1.0;
    double side_gain = 1.0;

    // Gains follow from the beamwidths unless overridden; solid angles always follow the beamwidths.
    static AntennaPattern from_beamwidths(double beam_horizontal, double beam_vertical,
                                          double side_lobe_ratio,
                                          std::optional<double> main_gain_override = std::nullopt,
                                          std::optional<double> side_gain_override = std::nullopt);

    double gain(Lobe lobe) const { return lobe == Lobe::Main ? main_gain : side_gain; }
};

// Maps an angle difference into (-pi, pi].
double wrap_angle(double angle);

double main_lobe_solid_angle(double beam_horizontal, double beam_vertical);
LobeGains sectored_gains(double side_lobe_ratio, double main_solid_angle);

bool in_main_lobe(const AntennaPattern& pattern, const Boresight& boresight,
                  const Boresight& direction);
double gain_towards(const AntennaPattern& pattern, const Boresight& boresight,
                    const Boresight& direction);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace thzcov
