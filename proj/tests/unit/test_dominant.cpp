#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "oracles.hpp"
#include "region_oracle.hpp"
#include "thzcov/dominant.hpp"
#include "thzcov/specfun.hpp"

using namespace thzcov;
using std::numbers::pi;

namespace {

// Raises the interferer side lobes so that near interferers exist.
const char* kStrongSideLobes = "g_as_dbi = 15\ng_us_dbi = 5\n";

bool close(double value, double reference, double relative) {
    return std::abs(value - reference) <= relative * std::abs(reference) + 1e-14;
}

void check_against_oracle(const std::string& text, Environment env, double relative) {
    const Scenario s = load_scenario(text);
    const oracle::RegionOracle reference(s, env);
    const auto ctx = InterferenceContext::make(s, env);
    for (int i = 0; i < 20; ++i) {
        const double x00 = 1.0 + 11.0 * i / 19.0;
        const auto regions = dominant_regions(x00, ctx);
        const auto expected = reference.counts(x00);
        CAPTURE(x00);
        CHECK(close(near_count(regions, ctx), expected.near, relative));
        CHECK(close(far_count(regions, ctx), expected.far, relative));
    }
}

}  // namespace

TEST_CASE("main-lobe window of the user") {
    const double beam = 33.0 * pi / 180.0;
    const RegionBounds b = region_bounds(6.0, beam, 1.7);
    CHECK(b.inner == doctest::Approx(1.7 / std::tan(std::atan(1.7 / 6.0) + beam / 2.0)).epsilon(1e-13));
    CHECK(b.inner == doctest::Approx(2.687).epsilon(1e-3));
    CHECK(std::isinf(b.outer));
    const RegionBounds overhead = region_bounds(0.0, beam, 1.7);
    CHECK(overhead.inner == 0.0);
    const RegionBounds narrow = region_bounds(6.0, 1e-9, 1.7);
    CHECK(narrow.inner == doctest::Approx(6.0).epsilon(1e-7));
    CHECK(narrow.outer == doctest::Approx(6.0).epsilon(1e-7));
}

TEST_CASE("clipped region edges follow the lobe rules") {
    const Scenario s = load_scenario(kStrongSideLobes);
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    for (double x00 = 0.5; x00 < 12.0; x00 += 0.5) {
        const DominantRegions r = dominant_regions(x00, ctx);
        const double lo = r.bounds.inner;
        const double hi = r.bounds.outer;
        CHECK(r.v_mm == std::min(hi, r.D(Lobe::Main, Lobe::Main)));
        CHECK(r.v_ms == std::max(lo, std::min(hi, r.D(Lobe::Side, Lobe::Main))));
        CHECK(r.v_ss1 == std::min(lo, r.D(Lobe::Side, Lobe::Side)));
        CHECK(r.v_ss2 == std::max(hi, r.D(Lobe::Side, Lobe::Side)));
        CHECK(r.v_sm1 == std::min(lo, r.D(Lobe::Main, Lobe::Side)));
        CHECK(r.v_sm2 == std::max(hi, r.D(Lobe::Main, Lobe::Side)));
        CHECK(r.v_ss1 <= r.v_sm1);
        CHECK(r.v_ms <= std::max(lo, r.v_mm));
        CHECK(r.main_sector + r.side_sector + s.blockage.self_block_angle == doctest::Approx(2.0 * pi));
    }
}

TEST_CASE("interferer counts equal the direct plane integral") {
    check_against_oracle("", Environment::TypicalIndoor, 1e-8);
    check_against_oracle("", Environment::OpenOffice, 1e-8);
    check_against_oracle(kStrongSideLobes, Environment::TypicalIndoor, 1e-8);
    check_against_oracle(kStrongSideLobes, Environment::OpenOffice, 1e-8);
    check_against_oracle(std::string(kStrongSideLobes) + "tau_db = 0\nphi_uv_deg = 60\n",
                         Environment::TypicalIndoor, 1e-8);
}

TEST_CASE("near interferers exist only when the side lobes reach") {
    const Scenario plain = load_scenario("");
    for (double x00 = 1.0; x00 <= 12.0; x00 += 1.0) CHECK(lambda_near(x00, plain) == 0.0);
    const Scenario strong = load_scenario(kStrongSideLobes);
    CHECK(lambda_near(6.0, strong) == 0.0);
    CHECK(lambda_near(10.0, strong) > 0.0);
}

TEST_CASE("far integral against quadrature") {
    for (auto env : {Environment::TypicalIndoor, Environment::OpenOffice}) {
        const Scenario s = load_scenario("");
        const oracle::RegionOracle reference(s, env);
        const auto ctx = InterferenceContext::make(s, env);
        const double edges[][2] = {{0.0, 5.0}, {2.0, 20.0}, {3.0, 9.0}, {7.0, 8.0},
                                   {10.0, 40.0}, {0.0, 100.0}, {5.0, 5.0}};
        for (const auto& e : edges) {
            const double expected = reference.far_integral(e[0], e[1]);
            CAPTURE(e[0]);
            CAPTURE(e[1]);
            CHECK(close(digamma_integral(e[0], e[1], ctx.hitting, ctx.los_decay), expected, 1e-6));
            CHECK(close(far_integral(e[0], e[1], ctx), expected, 1e-6));
        }
    }
}

TEST_CASE("open-office closed form equals its quadrature") {
    for (const char* text : {"", "phi_av_deg = 30\n", "lambda_b_per_m2 = 0.3\n", "tau_db = 0\n"}) {
        const Scenario s = load_scenario(text);
        const auto ctx = InterferenceContext::make(s, Environment::OpenOffice);
        const double cut = ctx.hitting.cutoff();
        for (double a = 0.0; a < 30.0; a += 1.3) {
            for (double b : {a, a + 0.4, a + 3.0, a + 11.0, cut, 60.0}) {
                if (b < a) continue;
                const double closed = digamma_open_office(a, b, ctx.hitting, ctx.los_decay);
                const double numeric = digamma_integral(a, b, ctx.hitting, ctx.los_decay);
                CAPTURE(a);
                CAPTURE(b);
                CHECK(close(closed, numeric, 1e-6));
            }
        }
    }
}

TEST_CASE("far integral edge cases") {
    const Scenario s = load_scenario("");
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    const auto& m = ctx.hitting;
    const double eta = ctx.los_decay;
    CHECK(digamma_integral(4.0, 4.0, m, eta) == 0.0);
    CHECK(digamma_integral(m.cutoff(), m.cutoff() + 10.0, m, eta) == 0.0);
    CHECK(digamma_integral(m.cutoff() + 1.0, m.cutoff() + 10.0, m, eta) == 0.0);
    CHECK_THROWS_AS(digamma_integral(5.0, 4.0, m, eta), specfun::DomainError);
    for (double split : {1.0, m.onset(), 12.0, 25.0}) {
        const double whole = digamma_integral(0.5, 30.0, m, eta);
        const double parts = digamma_integral(0.5, split, m, eta) + digamma_integral(split, 30.0, m, eta);
        CHECK(close(parts, whole, 1e-10));
    }
    CHECK(digamma_integral(0.0, 1e9, m, eta) == doctest::Approx(digamma_integral(0.0, m.cutoff(), m, eta)));
}

TEST_CASE("counts scale linearly with the AP density") {
    const Scenario base = load_scenario(kStrongSideLobes);
    for (double density : {0.0, 0.05, 0.3}) {
        const Scenario s = load_scenario(std::string(kStrongSideLobes) + "lambda_a_per_m2 = " +
                                         std::to_string(density) + "\n");
        for (double x00 : {2.0, 6.0, 10.0}) {
            CHECK(lambda_near(x00, s) == doctest::Approx(lambda_near(x00, base) * density / 0.1).epsilon(1e-12));
            CHECK(lambda_far(x00, s) == doctest::Approx(lambda_far(x00, base) * density / 0.1).epsilon(1e-12));
        }
    }
}

TEST_CASE("a vanishing AP azimuth beam removes far interferers") {
    const Scenario s = load_scenario("phi_ah_deg = 1e-9\n");
    for (double x00 : {2.0, 6.0, 10.0}) CHECK(lambda_far(x00, s) < 1e-10);
}

TEST_CASE("counts grow with the threshold") {
    for (double x00 : {3.0, 6.0, 9.0}) {
        double previous_far = -1.0;
        double previous_near = -1.0;
        for (double tau = 0.0; tau <= 6.0; tau += 0.5) {
            const Scenario s = load_scenario(std::string(kStrongSideLobes) + "tau_db = " + std::to_string(tau) + "\n");
            const double far = lambda_far(x00, s);
            const double near = lambda_near(x00, s);
            CHECK(far + near >= previous_far + previous_near - 1e-12);
            CHECK(near >= previous_near - 1e-12);
            previous_far = far;
            previous_near = near;
        }
    }
}

TEST_CASE("self-blockage and narrow user beams") {
    const Scenario wide = load_scenario(std::string(kStrongSideLobes) + "omega_deg = 0\n");
    const Scenario nearly_blind = load_scenario(std::string(kStrongSideLobes) + "omega_deg = 326.9\n");
    const Scenario base = load_scenario(kStrongSideLobes);
    CHECK(lambda_near(10.0, wide) > lambda_near(10.0, base));
    CHECK(lambda_near(10.0, nearly_blind) < lambda_near(10.0, base));
    CHECK(lambda_far(6.0, nearly_blind) < lambda_far(6.0, base));
    // Every visible interferer outside the user's main lobe uses side-lobe boundaries.
    const auto ctx = InterferenceContext::make(nearly_blind, Environment::TypicalIndoor);
    const auto r = dominant_regions(6.0, ctx);
    CHECK(r.side_sector == doctest::Approx(2.0 * pi - r.main_sector - ctx.self_block_angle));
}

TEST_CASE("an infeasible serving link makes the counts unbounded") {
    const Scenario s = load_scenario("sigma2_dbm = -66\n");
    const auto ctx = InterferenceContext::make(s, Environment::TypicalIndoor);
    REQUIRE(ctx.hitting.association_radius() < 6.0);
    const auto r = dominant_regions(6.0, ctx);
    CHECK(r.snr_infeasible);
    CHECK(std::isinf(near_count(r, ctx)));
}
