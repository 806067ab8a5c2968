#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fieldnoise/error.hpp"
#include "fieldnoise/fitting.hpp"
#include "fieldnoise/reference_table.hpp"
#include "fieldnoise/synthetic.hpp"

using namespace fieldnoise;
namespace syn = fieldnoise::synthetic;
using doctest::Approx;

namespace {

const std::vector<double> temps = syn::standard_temperatures();

NoiseDataset trap_ii(double noise, std::uint64_t seed)
{
    return syn::temp_scaling_dataset(42e-15, 46.0, 4.1, temps, noise, seed);
}

NoiseDataset anomaly(double noise, std::uint64_t seed)
{
    return syn::arrhenius_dataset(4e-12, 1.2e-10, 40.0, temps, noise, seed);
}

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

} // namespace

TEST_CASE("noiseless temperature-scaling recovery for every reference row")
{
    for (const auto& row : load_reference_table()) {
        CAPTURE(row.label);
        const auto d = syn::temp_scaling_dataset(row.s0_si(), row.t0, row.beta, temps, 0.0, 0);
        const auto fit = fit_temp_scaling(d);
        CHECK(rel_close(fit.s0, row.s0_si(), 1e-6));
        CHECK(rel_close(fit.t0, row.t0, 1e-6));
        CHECK(rel_close(fit.beta, row.beta, 1e-6));
        CHECK(fit.report.converged);
    }
}

TEST_CASE("two-sigma coverage at 5% noise")
{
    std::array<int, 3> covered{};
    const std::array<double, 3> truth{42e-15, 46.0, 4.1};
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rep = fit_model(trap_ii(0.05, seed), TemperatureModel::temp_scaling);
        for (std::size_t i = 0; i < 3; ++i)
            if (std::abs(rep.params[i] - truth[i]) <= 2 * rep.errors[i])
                ++covered[i];
    }
    for (int c : covered)
        CHECK(c >= 90);
}

TEST_CASE("flat data is rank deficient")
{
    NoiseDataset d;
    for (double t : temps)
        d.samples.push_back({t, 1e6, 5e-14, 2.5e-15});
    CHECK_THROWS_AS(fit_temp_scaling(d), RankDeficientFit);
    CHECK_THROWS_AS(fit_arrhenius(d), RankDeficientFit);
}

TEST_CASE("Arrhenius recovery")
{
    const auto fit = fit_arrhenius(anomaly(0.0, 0));
    CHECK(rel_close(fit.s0, 4e-12, 1e-6));
    CHECK(rel_close(fit.s_t, 1.2e-10, 1e-6));
    CHECK(rel_close(fit.t0, 40.0, 1e-6));
    CHECK(arrhenius_model(1e6, fit.s0, fit.s_t, fit.t0) == Approx(fit.s0 + fit.s_t).epsilon(1e-4));
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        CHECK(fit_arrhenius(anomaly(0.05, seed)).t0 == Approx(40.0).epsilon(0.10));
}

TEST_CASE("model selection by reduced chi^2")
{
    // A model the solver cannot fit at all (rank-deficient or divergent) counts as rejected.
    auto chi2 = [](const NoiseDataset& d, TemperatureModel m) {
        try {
            return fit_model(d, m).chi2_reduced;
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    int power_wins = 0, arrhenius_wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pd = trap_ii(0.05, seed);
        if (chi2(pd, TemperatureModel::temp_scaling) < chi2(pd, TemperatureModel::arrhenius))
            ++power_wins;
        const auto ad = anomaly(0.05, seed + 1000);
        if (chi2(ad, TemperatureModel::arrhenius) < chi2(ad, TemperatureModel::temp_scaling))
            ++arrhenius_wins;
    }
    CHECK(power_wins >= 90);
    CHECK(arrhenius_wins >= 90);
}

TEST_CASE("initial guess")
{
    const auto d = trap_ii(0.0, 0);
    const auto g = initial_guess(d, TemperatureModel::temp_scaling);
    CHECK(g[0] / 42e-15 <= 2);
    CHECK(g[0] / 42e-15 >= 0.5);
    CHECK(g[1] / 46.0 <= 2);
    CHECK(g[1] / 46.0 >= 0.5);
    CHECK(g[2] / 4.1 <= 2);
    CHECK(g[2] / 4.1 >= 0.5);

    NoiseDataset two;
    two.samples = {{10, 1e6, 1e-14, 0}, {50, 1e6, 5e-13, 0}};
    for (auto m : {TemperatureModel::temp_scaling, TemperatureModel::arrhenius}) {
        const auto p = initial_guess(two, m);
        for (double v : p) {
            CHECK(std::isfinite(v));
            CHECK(v > 0);
        }
    }

    auto shuffled = trap_ii(0.05, 4);
    const auto sorted_guess = initial_guess(shuffled, TemperatureModel::temp_scaling);
    std::reverse(shuffled.samples.begin(), shuffled.samples.end());
    std::swap(shuffled.samples[2], shuffled.samples[7]);
    CHECK(initial_guess(shuffled, TemperatureModel::temp_scaling) == sorted_guess);
    CHECK(initial_guess(shuffled, TemperatureModel::arrhenius) == initial_guess(trap_ii(0.05, 4), TemperatureModel::arrhenius));
}

TEST_CASE("scale and temperature-unit equivariance across seeds")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto d = trap_ii(0.05, seed);
        const auto base = fit_model(d, TemperatureModel::temp_scaling);
        const double c = 0.01 + 0.37 * static_cast<double>(seed);

        auto scaled = d;
        for (auto& s : scaled.samples) {
            s.s_e *= c;
            s.s_e_err *= c;
        }
        const auto rs = fit_model(scaled, TemperatureModel::temp_scaling);
        CHECK(rel_close(rs.params[0], c * base.params[0], 1e-9));
        CHECK(rel_close(rs.params[1], base.params[1], 1e-9));
        CHECK(rel_close(rs.params[2], base.params[2], 1e-9));
        for (std::size_t i = 0; i < rs.residuals.size(); ++i)
            CHECK(std::abs(rs.residuals[i] - base.residuals[i]) <= 1e-8);

        const double k = 0.5 + 0.05 * static_cast<double>(seed);
        auto stretched = d;
        for (auto& s : stretched.samples)
            s.temperature *= k;
        const auto rt = fit_model(stretched, TemperatureModel::temp_scaling);
        CHECK(rel_close(rt.params[1], k * base.params[1], 1e-9));
        CHECK(rel_close(rt.params[2], base.params[2], 1e-9));
        CHECK(rel_close(rt.params[0], base.params[0], 1e-9));
    }
}

TEST_CASE("objective never increases and refits are idempotent")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto d = trap_ii(0.05, seed);
        const auto rep = fit_model(d, TemperatureModel::temp_scaling);
        for (std::size_t i = 1; i < rep.objective_history.size(); ++i)
            CHECK(rep.objective_history[i] <= rep.objective_history[i - 1]);

        auto self = d;
        for (auto& s : self.samples)
            s.s_e = evaluate_model(rep.model, rep.params, s.temperature);
        const auto again = fit_model(self, TemperatureModel::temp_scaling);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(rel_close(again.params[i], rep.params[i], 1e-7));
    }
}

TEST_CASE("linear loss space")
{
    FitOptions opts;
    opts.loss_space = LossSpace::linear;
    const auto fit = fit_temp_scaling(trap_ii(0.0, 0), opts);
    CHECK(rel_close(fit.beta, 4.1, 1e-6));
    CHECK(fit.report.loss_space == LossSpace::linear);
}

TEST_CASE("preconditions and failures")
{
    auto d = trap_ii(0.05, 1);
    auto small = d;
    small.samples.resize(4);
    CHECK_THROWS_AS(fit_temp_scaling(small), InputError);

    NoiseDataset narrow;
    for (double t = 40; t <= 100; t += 10)
        narrow.samples.push_back({t, 1e6, temp_scaling_model(t, 4e-14, 46, 4.1), 0});
    CHECK_THROWS_AS(fit_temp_scaling(narrow), InputError);

    auto negative = d;
    negative.samples[3].s_e = -1e-15;
    CHECK_THROWS_AS(fit_temp_scaling(negative), InputError);

    FitOptions opts;
    opts.max_iterations = 1;
    opts.start = Params3{1e-13, 20.0, 2.0};
    try {
        (void)fit_temp_scaling(d, opts);
        FAIL("expected FitNotConverged");
    } catch (const FitNotConverged& e) {
        CHECK_FALSE(e.best().converged);
        CHECK(e.best().params[0] > 0);
    }
    CHECK(parse_temperature_model("arrhenius") == TemperatureModel::arrhenius);
    CHECK_THROWS_AS(parse_temperature_model("spline"), InputError);
    CHECK_THROWS_AS(parse_loss_space("huber"), InputError);
}

TEST_CASE("bootstrap covariance")
{
    FitOptions opts;
    opts.bootstrap_resamples = 200;
    opts.seed = 12;
    const auto d = trap_ii(0.05, 3);
    const auto a = fit_model(d, TemperatureModel::temp_scaling, opts);
    const auto b = fit_model(d, TemperatureModel::temp_scaling, opts);
    CHECK(a.covariance_method == "bootstrap-residuals");
    CHECK(a.covariance == b.covariance);
    for (int i = 0; i < 3; ++i) {
        const double jac = std::sqrt(a.jacobian_covariance(i, i));
        CHECK(a.errors[static_cast<std::size_t>(i)] > jac / 3);
        CHECK(a.errors[static_cast<std::size_t>(i)] < jac * 3);
    }
}

TEST_CASE("unweighted data falls back to unit weights")
{
    auto d = trap_ii(0.0, 0);
    for (auto& s : d.samples)
        s.s_e_err = 0;
    const auto fit = fit_temp_scaling(d);
    CHECK(rel_close(fit.t0, 46.0, 1e-6));
}
