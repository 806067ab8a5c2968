#include "fieldnoise/synthetic.hpp"

#include <cmath>

#include "fieldnoise/error.hpp"
#include "fieldnoise/fitting.hpp"
#include "fieldnoise/rng.hpp"

namespace fieldnoise::synthetic {

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    if (n < 2)
        return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n)
{
    if (!(lo > 0 && hi > 0))
        throw InputError("log grid bounds must be positive");
    auto g = linear_grid(std::log(lo), std::log(hi), n);
    for (auto& v : g)
        v = std::exp(v);
    g.front() = lo;
    if (n >= 2)
        g.back() = hi;
    return g;
}

std::vector<double> standard_temperatures()
{
    return linear_grid(7.0, 100.0, 12);
}

namespace {

NoiseSample noisy(double t, double f, double value, double noise, Rng& rng)
{
    if (noise == 0)
        return {t, f, value, 0.0};
    const double obs = value * (1.0 + noise * rng.normal());
    return {t, f, obs, noise * std::abs(obs)};
}

} // namespace

NoiseDataset temp_scaling_dataset(double s0, double t0, double beta, std::span<const double> temperatures,
                                  double noise, std::uint64_t seed, double frequency)
{
    Rng rng(seed);
    NoiseDataset data;
    data.label = "synthetic-temp-scaling";
    for (double t : temperatures)
        data.samples.push_back(noisy(t, frequency, temp_scaling_model(t, s0, t0, beta), noise, rng));
    return data;
}

NoiseDataset arrhenius_dataset(double s0, double s_t, double t0, std::span<const double> temperatures, double noise,
                               std::uint64_t seed, std::span<const double> frequencies)
{
    Rng rng(seed);
    NoiseDataset data;
    data.label = "synthetic-arrhenius";
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        const double t = temperatures[i];
        const double f = frequencies.empty() ? 1e6 : frequencies[i % frequencies.size()];
        const double at_f = rescale_frequency(arrhenius_model(t, s0, s_t, t0), 1e6, f);
        data.samples.push_back(noisy(t, f, at_f, noise, rng));
    }
    return data;
}

SidebandSeries sideband_series(double n_dot, double n_initial, std::span<const double> delays, std::size_t trials,
                               double trap_frequency, std::uint64_t seed, double contrast, bool sample)
{
    if (trials < 1)
        throw InputError("trials must be at least 1");
    Rng rng(seed);
    SidebandSeries series;
    series.trap_frequency = trap_frequency;
    for (double delay : delays) {
        const double n = n_initial + n_dot * delay;
        double p_rsb = contrast * n / (2.0 * n + 1.0);
        double p_bsb = contrast * (n + 1.0) / (2.0 * n + 1.0);
        if (sample) {
            const double nt = static_cast<double>(trials);
            p_rsb = static_cast<double>(rng.binomial(trials, p_rsb)) / nt;
            p_bsb = static_cast<double>(rng.binomial(trials, p_bsb)) / nt;
        }
        series.points.push_back({delay, p_bsb, p_rsb, trials});
    }
    return series;
}

} // namespace fieldnoise::synthetic
