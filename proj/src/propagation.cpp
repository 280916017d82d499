#include "thzcov/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thzcov/specfun.hpp"

namespace thzcov {

namespace {

// 3D distance d solving d^2 e^{K d} = ratio.
double distance_for_ratio(double ratio, double absorption) {
    if (absorption == 0.0) return std::sqrt(ratio);
    return 2.0 / absorption * specfun::lambert_w0(absorption / 2.0 * std::sqrt(ratio));
}

}  // namespace

LinkBudget LinkBudget::make(double transmit_power, const AntennaPattern& ap,
                            const AntennaPattern& ue, double frequency, double absorption,
                            double noise, double threshold) {
    const double spreading = std::pow(kSpeedOfLight / (4.0 * std::numbers::pi * frequency), 2);
    LinkBudget lb;
    for (Lobe a : {Lobe::Main, Lobe::Side}) {
        for (Lobe u : {Lobe::Main, Lobe::Side}) {
            lb.coefficient[static_cast<int>(a)][static_cast<int>(u)] =
                transmit_power * ap.gain(a) * ue.gain(u) * spreading;
        }
    }
    lb.absorption = absorption;
    lb.noise = noise;
    lb.threshold = threshold;
    return lb;
}

double received_power(double horizontal, Lobe ap, Lobe ue, const LinkBudget& lb,
                      double height_gap) {
    const double d2 = height_gap * height_gap + horizontal * horizontal;
    return lb.g(ap, ue) / d2 * std::exp(-lb.absorption * std::sqrt(d2));
}

double max_association_radius(const LinkBudget& lb, double height_gap) {
    const double ratio = lb.g(Lobe::Main, Lobe::Main) / (lb.noise * lb.threshold);
    if (!(ratio > height_gap * height_gap * std::exp(lb.absorption * height_gap))) {
        throw InfeasibleLink("zenith SNR does not exceed the SINR threshold");
    }
    const double d = distance_for_ratio(ratio, lb.absorption);
    return std::sqrt(std::max(0.0, d * d - height_gap * height_gap));
}

double dominant_distance(double serving_distance, Lobe ap, Lobe ue, const LinkBudget& lb,
                         double height_gap) {
    const double serving =
        received_power(serving_distance, Lobe::Main, Lobe::Main, lb, height_gap);
    const double margin = serving - lb.threshold * lb.noise;
    if (!(margin > 0.0)) return kUnbounded;
    const double d = distance_for_ratio(lb.g(ap, ue) * lb.threshold / margin, lb.absorption);
    const double squared = d * d - height_gap * height_gap;
    return squared > 0.0 ? std::sqrt(squared) : 0.0;
}

}  // namespace thzcov
