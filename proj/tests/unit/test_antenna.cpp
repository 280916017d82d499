#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "thzcov/antenna.hpp"
#include "thzcov/specfun.hpp"

using namespace thzcov;
using std::numbers::pi;

namespace {
double deg(double d) { return d * pi / 180.0; }
}  // namespace

TEST_CASE("main-lobe solid angle examples") {
    CHECK(main_lobe_solid_angle(deg(10), deg(10)) ==
          doctest::Approx(4.0 * std::asin(std::pow(std::tan(deg(5)), 2))).epsilon(1e-14));
    CHECK(main_lobe_solid_angle(deg(10), deg(10)) == doctest::Approx(0.030618).epsilon(1e-4));
    CHECK(main_lobe_solid_angle(deg(33), deg(33)) == doctest::Approx(0.351424).epsilon(1e-5));
    // asin near 1 amplifies the rounding of tan(pi/4) to about sqrt(eps).
    CHECK(main_lobe_solid_angle(pi / 2.0, pi / 2.0) == doctest::Approx(2.0 * pi).epsilon(1e-7));
    CHECK_THROWS_AS(main_lobe_solid_angle(deg(120), deg(120)), specfun::DomainError);
}

TEST_CASE("sectored gains against the reference table") {
    const AntennaPattern ap = AntennaPattern::from_beamwidths(deg(10), deg(10), 0.1);
    const AntennaPattern ue = AntennaPattern::from_beamwidths(deg(33), deg(33), 0.1);
    CHECK(linear_to_db(ap.main_gain) == doctest::Approx(25.7).epsilon(0.002));
    CHECK(std::abs(linear_to_db(ap.main_gain) - 25.0) <= 1.0);
    CHECK(std::abs(linear_to_db(ue.main_gain) - 15.0) <= 1.0);
    CHECK(std::abs(linear_to_db(ue.side_gain) + 10.0) <= 1.0);
    CHECK(linear_to_db(ue.main_gain) == doctest::Approx(15.1).epsilon(0.005));
    CHECK(linear_to_db(ue.side_gain) == doctest::Approx(-10.3).epsilon(0.005));
    CHECK(ap.main_gain > 1.0);
    CHECK(ap.side_gain < 1.0);
}

TEST_CASE("power conservation for random patterns") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> beam(0.01, 1.5);
    std::uniform_real_distribution<double> ratio(0.001, 0.999);
    for (int i = 0; i < 2000; ++i) {
        const double h = beam(rng);
        const double v = beam(rng);
        if (std::tan(h / 2.0) * std::tan(v / 2.0) > 1.0) continue;
        const AntennaPattern p = AntennaPattern::from_beamwidths(h, v, ratio(rng));
        CHECK(p.main_solid_angle + p.side_solid_angle == doctest::Approx(4.0 * pi).epsilon(1e-15));
        const double total = p.main_gain * p.main_solid_angle + p.side_gain * p.side_solid_angle;
        CHECK(std::abs(total - 4.0 * pi) / (4.0 * pi) <= 1e-12);
        CHECK(p.side_gain * p.side_solid_angle / (p.main_gain * p.main_solid_angle) ==
              doctest::Approx(p.side_lobe_ratio).epsilon(1e-12));
    }
}

TEST_CASE("gain overrides replace only the gains") {
    const AntennaPattern p =
        AntennaPattern::from_beamwidths(deg(10), deg(10), 0.1, db_to_linear(25.0), db_to_linear(-10.0));
    CHECK(p.main_gain == doctest::Approx(db_to_linear(25.0)));
    CHECK(p.side_gain == doctest::Approx(0.1));
    CHECK(p.main_solid_angle == doctest::Approx(main_lobe_solid_angle(deg(10), deg(10))));
}

TEST_CASE("narrow-beam limit of the solid angle") {
    for (double phi : {1e-2, 1e-3, 1e-4}) {
        CHECK(main_lobe_solid_angle(phi, phi) / (phi * phi) == doctest::Approx(1.0).epsilon(phi));
    }
}

TEST_CASE("gain_towards examples and boundary convention") {
    const AntennaPattern p = AntennaPattern::from_beamwidths(deg(33), deg(33), 0.1);
    const Boresight b{0.0, 0.3};
    CHECK(gain_towards(p, b, b) == p.main_gain);
    CHECK(gain_towards(p, b, {pi, 0.3}) == p.side_gain);
    CHECK(gain_towards(p, b, {p.beam_horizontal / 2.0, 0.3}) == p.main_gain);
    CHECK(gain_towards(p, {0.0, 0.0}, {0.0, p.beam_vertical / 2.0}) == p.main_gain);
    CHECK(gain_towards(p, b, {std::nextafter(p.beam_horizontal / 2.0, 1.0), 0.3}) == p.side_gain);
    CHECK(gain_towards(p, b, {0.0, 0.3 + p.beam_vertical}) == p.side_gain);
}

TEST_CASE("gain_towards is invariant under a common azimuth rotation") {
    const AntennaPattern p = AntennaPattern::from_beamwidths(deg(33), deg(20), 0.1);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> az(0.0, 2.0 * pi);
    std::uniform_real_distribution<double> el(-pi / 2.0, pi / 2.0);
    int disagreements = 0;
    for (int i = 0; i < 5000; ++i) {
        const Boresight b{az(rng), el(rng)};
        const Boresight d{az(rng), el(rng)};
        const double shift = az(rng);
        const double g0 = gain_towards(p, b, d);
        const double g1 = gain_towards(p, {std::fmod(b.azimuth + shift, 2.0 * pi), b.elevation},
                                       {std::fmod(d.azimuth + shift, 2.0 * pi), d.elevation});
        // Rounding can only matter exactly on a lobe edge.
        const double edge = std::abs(std::abs(wrap_angle(d.azimuth - b.azimuth)) - p.beam_horizontal / 2.0);
        if (g0 != g1 && edge > 1e-12) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("wrap_angle maps into (-pi, pi]") {
    CHECK(wrap_angle(pi) == doctest::Approx(pi));
    CHECK(wrap_angle(-pi) == doctest::Approx(pi));
    CHECK(wrap_angle(3.0 * pi / 2.0) == doctest::Approx(-pi / 2.0));
    CHECK(wrap_angle(0.25 + 6.0 * pi) == doctest::Approx(0.25));
    for (double a = -20.0; a < 20.0; a += 0.1) {
        const double w = wrap_angle(a);
        CHECK(w > -pi);
        CHECK(w <= pi);
        CHECK(std::abs(std::remainder(w - a, 2.0 * pi)) < 1e-12);
    }
}

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
    CHECK(linear_to_db(db_to_linear(-7.3)) == doctest::Approx(-7.3));
}
