#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "fieldnoise/error.hpp"
#include "fieldnoise/physics.hpp"
#include "fieldnoise/synthetic.hpp"

using namespace fieldnoise;
using doctest::Approx;

namespace {

SidebandSeries series_from_n(const std::vector<double>& delays, const std::vector<double>& n, std::size_t trials = 1000)
{
    // P_rsb = c n / (2n+1), P_bsb = c (n+1)/(2n+1) inverts exactly to n.
    SidebandSeries s;
    s.trap_frequency = 1e6;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double c = 0.9;
        s.points.push_back({delays[i], c * (n[i] + 1) / (2 * n[i] + 1), c * n[i] / (2 * n[i] + 1), trials});
    }
    return s;
}

} // namespace

TEST_CASE("phonon number from sideband probabilities")
{
    CHECK(phonon_number(0.5, 0.0) == 0.0);
    CHECK(phonon_number(0.66, 0.33) == Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(phonon_number(0.2, 0.2), DegenerateThermometry);
    CHECK_THROWS_AS(phonon_number(0.2, 0.3), DegenerateThermometry);
    CHECK_THROWS_AS(phonon_number(1.2, 0.3), InputError);
}

TEST_CASE("phonon number is invariant under a common contrast factor")
{
    const double p_bsb = 0.7, p_rsb = 0.4;
    const double n = phonon_number(p_bsb, p_rsb);
    for (double c : {0.1, 0.5, 0.93, 1.0 / p_bsb})
        CHECK(phonon_number(c * p_bsb, c * p_rsb) == Approx(n).epsilon(1e-13));
}

TEST_CASE("binomial error is floored at 1/(2N)")
{
    CHECK(binomial_error(0.5, 100) == Approx(0.05));
    CHECK(binomial_error(0.0, 100) == Approx(0.005));
    CHECK(binomial_error(1.0, 50) == Approx(0.01));
}

TEST_CASE("heating rate on exact lines")
{
    SUBCASE("three points, equal weights")
    {
        SidebandSeries s;
        s.trap_frequency = 1e6;
        // n = 0, 1, 2 with identical binomial weights is not possible; fall back to the line fit directly.
        const std::vector<double> x{0.0, 0.010, 0.020}, y{0.0, 1.0, 2.0}, sig{0.1, 0.1, 0.1};
        const auto line = weighted_line_fit(x, y, sig);
        CHECK(line.slope == Approx(100.0).epsilon(1e-12));
        CHECK(line.intercept == Approx(0.0).scale(1.0));
    }
    SUBCASE("affine series through the sideband inversion")
    {
        std::vector<double> d, n;
        for (int k = 0; k < 6; ++k) {
            d.push_back(0.002 * k);
            n.push_back(0.3 + 250.0 * d.back());
        }
        const auto r = heating_rate(series_from_n(d, n));
        CHECK(std::abs(r.n_dot - 250.0) / 250.0 <= 1e-12);
        CHECK(r.n_initial == Approx(0.3).epsilon(1e-12));
        CHECK(r.skipped.empty());
    }
    SUBCASE("flat series")
    {
        const auto r = heating_rate(series_from_n({0, 1e-3, 2e-3, 3e-3}, {1.5, 1.5, 1.5, 1.5}));
        CHECK(std::abs(r.n_dot) < 1e-9);
    }
}

TEST_CASE("degenerate rows are skipped and reported")
{
    auto clean = series_from_n({0, 1e-3, 2e-3, 3e-3}, {0.2, 0.6, 1.0, 1.4});
    auto dirty = clean;
    dirty.points.insert(dirty.points.begin() + 2, SidebandPoint{1.5e-3, 0.3, 0.3, 1000});
    const auto a = heating_rate(clean);
    const auto b = heating_rate(dirty);
    CHECK(b.n_dot == Approx(a.n_dot).epsilon(1e-14));
    REQUIRE(b.skipped.size() == 1);
    CHECK(b.skipped[0] == 2);

    SidebandSeries all_bad;
    all_bad.trap_frequency = 1e6;
    all_bad.points = {{0, 0.3, 0.3, 100}, {1e-3, 0.2, 0.4, 100}};
    CHECK_THROWS_AS(heating_rate(all_bad), InsufficientData);
}

TEST_CASE("sideband series validation")
{
    SidebandSeries s = series_from_n({0, 1e-3}, {0.1, 0.2});
    s.points[1].delay = 0;
    CHECK_THROWS_AS(heating_rate(s), InputError);
}

TEST_CASE("heating rate recovery from binomially sampled series")
{
    std::vector<double> delays;
    for (int k = 0; k <= 8; ++k)
        delays.push_back(0.125e-3 * k);
    int within = 0;
    const int trials = 100;
    for (int seed = 0; seed < trials; ++seed) {
        const auto s = synthetic::sideband_series(4200.0, 0.05, delays, 1000, 1e6, static_cast<std::uint64_t>(seed));
        const auto r = heating_rate(s);
        if (std::abs(r.n_dot - 4200.0) <= 2.0 * r.n_dot_err)
            ++within;
    }
    // Two standard errors cover about 95%; allow for the small bias of the ratio estimator.
    CHECK(within >= 88);
}

TEST_CASE("field noise conversion")
{
    CHECK(field_noise_from_heating(1.0, 1e6) == Approx(1.51e-14).epsilon(0.01));
    CHECK(field_noise_from_heating(0.0, 3e6) == 0.0);
    CHECK(field_noise_from_heating(4200.0, 1e6) == Approx(6.3e-11).epsilon(0.01));
    // Oracle from the constants themselves.
    const double m = 88.0 * si::atomic_mass_unit;
    const double expected = 4.0 * m * si::hbar * 2.0 * std::numbers::pi * 1e6 / (si::elementary_charge * si::elementary_charge);
    CHECK(field_noise_from_heating(1.0, 1e6) == Approx(expected).epsilon(1e-15));
    CHECK(field_noise_from_heating(2.0, 1e6) == Approx(2 * field_noise_from_heating(1.0, 1e6)).epsilon(1e-15));
    CHECK(field_noise_from_heating(1.0, 2e6) == Approx(2 * field_noise_from_heating(1.0, 1e6)).epsilon(1e-15));
    CHECK_THROWS_AS(field_noise_from_heating(1.0, 0.0), InputError);
    CHECK_THROWS_AS(field_noise_from_heating(-1.0, 1e6), InputError);
}

TEST_CASE("frequency rescaling")
{
    const double x = 3.7e-13;
    CHECK(rescale_frequency(x, 0.86e6, 1e6) == Approx(0.86 * x).epsilon(1e-15));
    CHECK(rescale_frequency(x, 1e6, 1e6) == x);
    CHECK(rescale_frequency(x, 2e6, 1e6) == Approx(2 * x).epsilon(1e-15));
    for (double a : {0.3e6, 0.86e6, 1.23e6, 7e6}) {
        const double back = rescale_frequency(rescale_frequency(x, a, 1e6), 1e6, a);
        CHECK(std::abs(back - x) <= 4 * std::numeric_limits<double>::epsilon() * x);
    }
}
