#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fieldnoise/error.hpp"
#include "fieldnoise/extrapolation.hpp"
#include "fieldnoise/physics.hpp"

using namespace fieldnoise;
using doctest::Approx;

TEST_CASE("distance and frequency scaling")
{
    const ScalingLaw law;
    CHECK(scale_noise(law, 100e-9, 1e4) == Approx(1e3).epsilon(1e-12));
    CHECK(scale_noise(law, 75e-6, 1e6) == Approx(3.16e-11).epsilon(0.01));
    // Within a factor of about two of the 4200 quanta/s room-temperature rate.
    const double trap = field_noise_from_heating(4200, 1e6);
    CHECK(trap / scale_noise(law, 75e-6, 1e6) > 1);
    CHECK(trap / scale_noise(law, 75e-6, 1e6) < 2.5);
    CHECK(scale_noise(law, 2e-6, 1e4) == Approx(scale_noise(law, 1e-6, 1e4) / 16).epsilon(1e-14));
    for (double d : {1e-8, 3.3e-7, 1e-5, 2e-4})
        for (double f : {1.0, 17.0, 1e4, 3e7})
            CHECK(scale_noise(law, d, f) * std::pow(d, 4) * f == Approx(law.reference).epsilon(1e-14));
    CHECK_THROWS_AS(scale_noise(law, 0, 1e4), InputError);
    CHECK_THROWS_AS(scale_noise({4, 1, -1}, 1e-6, 1e4), InputError);
}

TEST_CASE("DC field fluctuation")
{
    const ScalingLaw law;
    const double sigma = dc_field_fluctuation(law, 1e-6, 1.0, 1e-12);
    CHECK(sigma == Approx(std::sqrt(1e3 * std::log(1e12))).epsilon(1e-14));
    CHECK(sigma > 50);
    CHECK(sigma < 200);
    const double tau0 = 1e-12;
    const double ln_one = dc_field_fluctuation(law, 1e-6, tau0 * std::exp(1.0), tau0);
    CHECK(ln_one * ln_one == Approx(scale_noise(law, 1e-6, 1e4) * 1e4).epsilon(1e-12));
    double prev = 0;
    for (double tau = 1e-9; tau < 1e6; tau *= 10) {
        const double s = dc_field_fluctuation(law, 1e-6, tau, tau0);
        CHECK(s > prev);
        prev = s;
    }
    CHECK_THROWS_AS(dc_field_fluctuation({4, 1.2, 1e-21}, 1e-6, 1, 1e-12), DomainError);
    CHECK_THROWS_AS(dc_field_fluctuation(law, 1e-6, 1e-13, 1e-12), InputError);
}

TEST_CASE("patch product")
{
    CHECK(patch_product(100, 1e-6) == Approx(1e-20).epsilon(1e-12));
    CHECK(patch_product(0, 1e-6) == 0);
    const ScalingLaw law;
    for (double tau : {1e-3, 1.0, 1e4}) {
        const double d = 3e-7;
        const double loop = patch_product(dc_field_fluctuation(law, d, tau, 1e-12), d);
        CHECK(loop == Approx(law.reference * std::log(tau / 1e-12)).epsilon(1e-12));
    }
}

TEST_CASE("cantilever conversion")
{
    const CantileverConfig base{1e-12, 1e-15, 0.5, 300};
    const double s = cantilever_field_noise(base, 1.380649e-23);
    CHECK(s == Approx(4 * 1.380649e-23 * 300 * 1e-12 / std::pow(1e-15 * 0.5, 2)).epsilon(1e-14));
    auto v2 = base;
    v2.voltage *= 2;
    CHECK(cantilever_field_noise(v2, 1.380649e-23) == Approx(s / 4).epsilon(1e-14));
    auto hot = base;
    hot.temperature *= 2;
    hot.gamma *= 2;
    CHECK(cantilever_field_noise(hot, 1.380649e-23) == Approx(4 * s).epsilon(1e-14));
    CHECK_THROWS_AS(cantilever_field_noise({0, 1e-15, 1, 300}, 1.380649e-23), InputError);
}

TEST_CASE("comparison constants")
{
    const auto& c = builtin_comparison_constants();
    CHECK(c.version >= 1);
    CHECK(c.at("static_field_sigma_e_1um").value == 1e4);
    CHECK(c.at("contact_potential_sigma_v2_a").value == 1e-12);
    CHECK(c.at("room_temperature_sf_d4").units == "V^2 m^2");
    CHECK_FALSE(c.at("cantilever_agreement_factor").source.empty());
    CHECK_THROWS_AS(c.at("nope"), InputError);
    CHECK_THROWS_AS(parse_comparison_constants("{\"version\": 1, \"constants\": {\"x\": {\"value\": \"a\"}}}"), InputError);
    CHECK_THROWS_AS(parse_comparison_constants("not json"), InputError);
}

TEST_CASE("extrapolation report")
{
    const ScalingLaw law;
    ExtrapolationQuery q;
    q.distance = 1e-6;
    const auto rep = extrapolate(law, q);
    REQUIRE(rep.sigma_e.has_value());
    CHECK(*rep.sigma_e == Approx(166.2).epsilon(0.001));
    // The static patch field at 1 um is about a hundred times the fluctuating one.
    CHECK(*rep.static_field_ratio > 30);
    CHECK(*rep.static_field_ratio < 300);
    CHECK(*rep.patch_ratio == Approx(*rep.sigma_v2_a / 1e-12));
    CHECK(*rep.sigma_v2_a > 1e-20);
    CHECK(*rep.sigma_v2_a < 1e-19);
    CHECK_FALSE(rep.cantilever_s_e.has_value());

    q.cantilever = CantileverConfig{1e-12, 1e-15, 1.0, 300};
    q.distance = 20e-9;
    q.frequency = 1e4;
    const auto with = extrapolate(law, q);
    REQUIRE(with.cantilever_ratio.has_value());
    CHECK(*with.cantilever_ratio == Approx(*with.cantilever_s_e / with.s_e));
    CHECK(*with.cantilever_within_agreement == (*with.cantilever_ratio <= 10 && *with.cantilever_ratio >= 0.1));

    const auto non_unit = extrapolate({4, 1.3, 1e-21}, ExtrapolationQuery{});
    CHECK_FALSE(non_unit.sigma_e.has_value());
    CHECK_FALSE(non_unit.notes.empty());
}
