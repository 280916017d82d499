#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "thzcov/scenario.hpp"

using namespace thzcov;
using std::numbers::pi;

namespace {

bool same(const AntennaParams& a, const AntennaParams& b) {
    return a.beam_horizontal == b.beam_horizontal && a.beam_vertical == b.beam_vertical &&
           a.side_lobe_ratio == b.side_lobe_ratio && a.main_gain == b.main_gain &&
           a.side_gain == b.side_gain;
}

bool same(const Scenario& a, const Scenario& b) {
    const auto& n = a.network;
    const auto& m = b.network;
    const auto& x = a.blockage;
    const auto& y = b.blockage;
    const auto& p = a.propagation;
    const auto& q = b.propagation;
    const bool tables = p.absorption_table.has_value() == q.absorption_table.has_value() &&
                        (!p.absorption_table || p.absorption_table->points == q.absorption_table->points);
    return n.ap_height == m.ap_height && n.ue_height == m.ue_height && n.ap_density == m.ap_density &&
           n.room_length == m.room_length && n.room_width == m.room_width &&
           x.self_block_angle == y.self_block_angle && x.blocker_height == y.blocker_height &&
           x.blocker_length == y.blocker_length && x.blocker_width == y.blocker_width &&
           x.blocker_density == y.blocker_density && x.blocker_speed == y.blocker_speed &&
           x.wall_mean_length == y.wall_mean_length && x.wall_density == y.wall_density &&
           x.wall_length_law == y.wall_length_law &&
           x.planar_blocker_radius == y.planar_blocker_radius && same(a.ap, b.ap) &&
           same(a.ue, b.ue) && p.transmit_power == q.transmit_power &&
           p.noise_power == q.noise_power && p.frequency == q.frequency &&
           p.absorption == q.absorption && p.sinr_threshold == q.sinr_threshold &&
           p.association_radius_override == q.association_radius_override && tables;
}

std::string error_of(const std::string& text) {
    try {
        load_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("empty document gives the reference defaults") {
    const Scenario s = load_scenario("");
    CHECK(s.network.ap_height == 3.0);
    CHECK(s.network.ue_height == 1.3);
    CHECK(s.network.ap_density == doctest::Approx(0.1));
    CHECK(s.network.room_length == 60.0);
    CHECK(s.network.room_width == 50.0);
    CHECK(s.blockage.self_block_angle == doctest::Approx(pi / 3.0));
    CHECK(s.blockage.blocker_height == 1.7);
    CHECK(s.blockage.blocker_length == 0.6);
    CHECK(s.blockage.blocker_width == 0.3);
    CHECK(s.blockage.blocker_density == 0.1);
    CHECK(s.blockage.wall_mean_length == 3.0);
    CHECK(s.blockage.wall_density == 0.04);
    CHECK(s.blockage.wall_length_law == WallLengthLaw::Fixed);
    CHECK(s.ap.beam_horizontal == doctest::Approx(10.0 * pi / 180.0));
    CHECK(s.ue.beam_vertical == doctest::Approx(33.0 * pi / 180.0));
    CHECK(s.ap.side_lobe_ratio == 0.1);
    CHECK_FALSE(s.ap.main_gain.has_value());
    CHECK(s.propagation.transmit_power == doctest::Approx(std::pow(10.0, 0.5) * 1e-3));
    CHECK(s.propagation.noise_power == doctest::Approx(std::pow(10.0, -7.7) * 1e-3));
    CHECK(s.propagation.frequency == 1.05e12);
    CHECK(s.propagation.absorption == 0.07512);
    CHECK(s.propagation.sinr_threshold == doctest::Approx(std::pow(10.0, 0.3)));
    CHECK(s.height_gap() == doctest::Approx(1.7));
    CHECK(s.wall_height() == s.network.ap_height);
}

TEST_CASE("validation names the violated invariant") {
    CHECK(error_of("h_u_m = 3.5").find("h_A > h_U") != std::string::npos);
    CHECK(error_of("h_b_m = 3.2").find("h_B") != std::string::npos);
    CHECK(error_of("k_a = 1.5").find("k") != std::string::npos);
    CHECK(error_of("lambda_a_per_m2 = -1").find("lambda") != std::string::npos);
    CHECK(error_of("omega_deg = 360").find("omega") != std::string::npos);
    CHECK(error_of("phi_ah_deg = 100\nphi_av_deg = 100") != "");
}

TEST_CASE("parse errors carry the line number") {
    CHECK(error_of("# comment\nh_a_m 3").find("line 2") != std::string::npos);
    CHECK(error_of("h_a_m = 3\nh_a_m = 4").find("line 2") != std::string::npos);
    CHECK(error_of("nonsense = 1").find("unknown key") != std::string::npos);
    CHECK(error_of("h_a_m = three").find("line 1") != std::string::npos);
}

TEST_CASE("unit conversions at the boundary") {
    const Scenario s = load_scenario("tau_db = 0\np_t_dbm = 30\nomega_deg = 90\nf_thz = 1.2\n"
                                     "g_am_dbi = 20  # trailing comment\n");
    CHECK(s.propagation.sinr_threshold == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.propagation.transmit_power == doctest::Approx(1.0));
    CHECK(s.blockage.self_block_angle == doctest::Approx(pi / 2.0));
    CHECK(s.propagation.frequency == doctest::Approx(1.2e12));
    CHECK(*s.ap.main_gain == doctest::Approx(100.0));
}

TEST_CASE("derived constants at the defaults") {
    const Scenario s = load_scenario("");
    const DerivedParams d = derive_constants(s);
    // Independent re-evaluation of the blockage constants.
    const double zeta = std::exp(-2.0 * 0.6 * 0.3 * 0.1);
    const double human = 2.0 * (0.6 + 0.3) * 0.1 * (1.7 - 1.3) / (pi * 1.7);
    const double wall = 0.04 * (2.0 / pi) * 3.0;
    CHECK(d.human_clear_scale == doctest::Approx(zeta).epsilon(1e-14));
    CHECK(d.human_clear_scale == doctest::Approx(0.96464).epsilon(1e-5));
    CHECK(d.human_decay == doctest::Approx(human).epsilon(1e-14));
    CHECK(d.human_decay == doctest::Approx(0.013481).epsilon(1e-4));
    CHECK(d.wall_decay == doctest::Approx(wall).epsilon(1e-14));
    CHECK(d.wall_decay == doctest::Approx(0.076394).epsilon(1e-4));
    CHECK(d.decay == d.human_decay + d.wall_decay);
    CHECK(d.height_gap == doctest::Approx(1.7));
    CHECK(d.association_radius > 0.0);
    CHECK(d.association_elevation == doctest::Approx(std::atan(1.7 / d.association_radius)));
    CHECK(d.hitting_onset < d.hitting_cutoff);
    // g = P_T G_A G_U (c / 4 pi f)^2
    const double lambda = kSpeedOfLight / (4.0 * pi * 1.05e12);
    CHECK(d.link.g(Lobe::Main, Lobe::Side) ==
          doctest::Approx(s.propagation.transmit_power * d.ap_pattern.main_gain *
                          d.ue_pattern.side_gain * lambda * lambda)
              .epsilon(1e-13));
}

TEST_CASE("no blockers gives unit clear scale and zero decay") {
    const DerivedParams d = derive_constants(load_scenario("lambda_b_per_m2 = 0\nlambda_w_per_m2 = 0"));
    CHECK(d.human_clear_scale == 1.0);
    CHECK(d.decay == 0.0);
}

TEST_CASE("open office drops the wall decay") {
    const DerivedParams d = derive_constants(load_scenario(""), Environment::OpenOffice);
    CHECK(d.wall_decay == 0.0);
    CHECK(d.decay == d.human_decay);
}

TEST_CASE("blocker density moves the clear scale and decay strictly") {
    double previous_scale = 2.0;
    double previous_decay = -1.0;
    for (double density : {0.0, 0.05, 0.1, 0.2, 0.4}) {
        Scenario s = load_scenario("");
        s.blockage.blocker_density = density;
        const DerivedParams d = derive_constants(s);
        CHECK(d.human_clear_scale < previous_scale);
        CHECK(d.human_decay > previous_decay);
        previous_scale = d.human_clear_scale;
        previous_decay = d.human_decay;
    }
}

TEST_CASE("serialize round trip parses to an equal scenario") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    CHECK(same(load_scenario(serialize(load_scenario(""))), load_scenario("")));
    const auto number = [&](double lo, double hi) { return std::to_string(lo + (hi - lo) * u(rng)); };
    for (int i = 0; i < 300; ++i) {
        std::string text;
        text += "h_a_m = " + number(2.5, 3.5) + "\n";
        text += "h_u_m = " + number(0.5, 1.2) + "\n";
        text += "h_b_m = " + number(1.3, 2.0) + "\n";
        text += "lambda_a_per_m2 = " + number(0.0, 0.3) + "\n";
        text += "omega_deg = " + number(0.0, 120.0) + "\n";
        text += "lambda_b_per_m2 = " + number(0.0, 0.3) + "\n";
        text += "lambda_w_per_m2 = " + number(0.0, 0.1) + "\n";
        text += u(rng) < 0.5 ? "wall_length_law = fixed\n" : "wall_length_law = exponential\n";
        text += "phi_ah_deg = " + number(3.0, 60.0) + "\n";
        text += "phi_uv_deg = " + number(5.0, 60.0) + "\n";
        text += "k_u = " + number(0.05, 0.5) + "\n";
        if (u(rng) < 0.5) text += "g_am_dbi = " + number(15.0, 30.0) + "\n";
        if (u(rng) < 0.3) text += "g_us_dbi = " + number(-20.0, -5.0) + "\n";
        text += "p_t_dbm = " + number(-5.0, 10.0) + "\n";
        text += "sigma2_dbm = " + number(-85.0, -75.0) + "\n";
        text += "f_thz = " + number(0.9, 1.2) + "\n";
        text += "k_abs_per_m = " + number(0.0, 0.2) + "\n";
        text += "tau_db = " + number(-3.0, 6.0) + "\n";
        if (u(rng) < 0.3) text += "r_t_m = " + number(5.0, 15.0) + "\n";
        const Scenario s = load_scenario(text);
        const std::string written = serialize(s);
        const Scenario back = load_scenario(written);
        CHECK(same(back, s));
        CHECK(serialize(back) == written);
    }
}

TEST_CASE("absorption table: interpolation, range and exclusivity") {
    const AbsorptionTable t = AbsorptionTable::parse("frequency_hz,K_per_m\n1.0e12,0.05\n1.1e12,0.15\n", "inline");
    CHECK(t.at(1.05e12) == doctest::Approx(0.10));
    CHECK(t.at(1.0e12) == doctest::Approx(0.05));
    CHECK_THROWS_AS(t.at(0.9e12), ConfigError);

    const auto dir = std::filesystem::temp_directory_path() / "thzcov_scenario_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "k.csv") << "f,k\n1.0e12,0.05\n1.1e12,0.15\n";
    std::ofstream(dir / "s.cfg") << "k_abs_table = k.csv\nf_thz = 1.05\n";
    const Scenario s = load_scenario_file(dir / "s.cfg");
    REQUIRE(s.propagation.absorption_table.has_value());
    CHECK(s.propagation.absorption_at_carrier() == doctest::Approx(0.10));
    CHECK_THROWS_AS(load_scenario("k_abs_per_m = 0.1\nk_abs_table = " + (dir / "k.csv").string()),
                    ConfigError);
}

TEST_CASE("environment names") {
    CHECK(parse_environment("indoor") == Environment::TypicalIndoor);
    CHECK(parse_environment("open-office") == Environment::OpenOffice);
    CHECK(to_string(Environment::OpenOffice) == "open-office");
    CHECK_THROWS_AS(parse_environment("outdoor"), ConfigError);
}
