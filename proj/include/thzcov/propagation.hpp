#pragma once

#include <array>
#include <limits>
#include <stdexcept>

#include "thzcov/antenna.hpp"

namespace thzcov {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

class InfeasibleLink : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LinkBudget {
    // Received power times squared distance at zero absorption, indexed [ap lobe][ue lobe].
    std::array<std::array<double, 2>, 2> coefficient{};
    double absorption = 0.0;  // per meter
    double noise = 0.0;       // watts
    double threshold = 1.0;   // linear SINR

    static LinkBudget make(double transmit_power, const AntennaPattern& ap,
                           const AntennaPattern& ue, double frequency, double absorption,
                           double noise, double threshold);

    double g(Lobe ap, Lobe ue) const {
        return coefficient[static_cast<int>(ap)][static_cast<int>(ue)];
    }
};

double received_power(double horizontal, Lobe ap, Lobe ue, const LinkBudget& lb,
                      double height_gap);

// Horizontal distance at which the unblocked SNR equals the threshold.
double max_association_radius(const LinkBudget& lb, double height_gap);

// Horizontal distance at which a lone interferer pulls the SINR to the threshold.
// Returns kUnbounded when the serving SNR alone is below the threshold, 0 when the
// interferer is dominant even directly overhead.
double dominant_distance(double serving_distance, Lobe ap, Lobe ue, const LinkBudget& lb,
                         double height_gap);

}  // namespace thzcov
