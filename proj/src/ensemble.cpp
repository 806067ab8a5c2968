#include "fieldnoise/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fieldnoise/error.hpp"
#include "fieldnoise/rng.hpp"

namespace fieldnoise {

namespace {

// Stream ids for trace generation live in a separate range from sampling ids.
constexpr std::uint64_t trace_stream_offset = 0x5452414345000000ULL;

} // namespace

void EnsembleConfig::validate() const
{
    if (!(beta > 0))
        throw InputError("beta must be positive");
    if (!(e_min > 0 && e_min < e_max))
        throw InputError("energy window must satisfy 0 < e_min < e_max");
    if (!(tau0 > 0))
        throw InputError("tau0 must be positive");
    if (n_fluctuators < 1)
        throw InputError("n must be at least 1");
    if (!(amplitude > 0))
        throw InputError("amplitude must be positive");
}

FluctuatorEnsemble::FluctuatorEnsemble(std::vector<double> energies, std::vector<double> amplitudes, double tau0)
    : energies_(std::move(energies)), amplitudes_(std::move(amplitudes)), tau0_(tau0)
{
    if (energies_.size() != amplitudes_.size())
        throw InputError("ensemble energies and amplitudes differ in length");
    if (!(tau0_ > 0))
        throw InputError("tau0 must be positive");
}

double FluctuatorEnsemble::total_power() const noexcept
{
    double sum = 0.0;
    for (double a : amplitudes_)
        sum += a * a;
    return sum;
}

FluctuatorEnsemble FluctuatorEnsemble::scaled(double factor) const
{
    auto amps = amplitudes_;
    for (auto& a : amps)
        a *= factor;
    return {energies_, std::move(amps), tau0_};
}

double activation_energy_quantile(double u, double beta, double e_min, double e_max)
{
    // Work relative to e_max so e^beta cannot overflow for large beta.
    const double lo = std::pow(e_min / e_max, beta);
    return e_max * std::pow(lo + u * (1.0 - lo), 1.0 / beta);
}

FluctuatorEnsemble sample_ensemble(const EnsembleConfig& cfg)
{
    cfg.validate();
    std::vector<double> energies(cfg.n_fluctuators);
    for (std::size_t i = 0; i < cfg.n_fluctuators; ++i) {
        Rng rng(cfg.seed, i);
        const double e = activation_energy_quantile(rng.uniform(), cfg.beta, cfg.e_min, cfg.e_max);
        energies[i] = std::clamp(e, cfg.e_min, cfg.e_max);
    }
    return {std::move(energies), std::vector<double>(cfg.n_fluctuators, cfg.amplitude), cfg.tau0};
}

SwitchingTime switching_time(double energy, double temperature, double tau0)
{
    if (!(temperature > 0))
        throw InputError("temperature must be positive");
    const double log_tau = std::log(tau0) + energy / temperature;
    if (log_tau >= std::log(max_switching_time))
        return {max_switching_time, true};
    return {tau0 * std::exp(energy / temperature), false};
}

double lorentzian_kernel(double omega, double log_omega_tau)
{
    // tau / (1 + x^2) = 1 / (omega (x + 1/x)) = 1 / (2 omega cosh(ln x))
    const double y = std::abs(log_omega_tau);
    const double log_two_cosh = y + std::log1p(std::exp(-2.0 * y));
    return std::exp(-log_two_cosh) / omega;
}

std::vector<double> ensemble_spectrum(const FluctuatorEnsemble& ens, double temperature,
                                      std::span<const double> frequencies)
{
    if (!(temperature > 0))
        throw InputError("temperature must be positive");
    const auto energies = ens.energies();
    const auto amps = ens.amplitudes();
    const double log_tau0 = std::log(ens.tau0());

    std::vector<double> out;
    out.reserve(frequencies.size());
    for (double f : frequencies) {
        if (!(f > 0))
            throw InputError("frequencies must be positive");
        const double omega = 2.0 * std::numbers::pi * f;
        const double log_omega_tau0 = std::log(omega) + log_tau0;
        double sum = 0.0;
        for (std::size_t i = 0; i < energies.size(); ++i)
            sum += 4.0 * amps[i] * amps[i] * lorentzian_kernel(omega, log_omega_tau0 + energies[i] / temperature);
        out.push_back(sum);
    }
    return out;
}

FluctuatorEnsemble calibrate_ensemble(const FluctuatorEnsemble& ens, double temperature, double frequency,
                                      double target)
{
    if (!(target > 0))
        throw InputError("calibration target must be positive");
    const double f[] = {frequency};
    const double current = ensemble_spectrum(ens, temperature, f).front();
    if (!(current > 0))
        throw NumericalError("ensemble spectrum vanishes at the calibration point");
    return ens.scaled(std::sqrt(target / current));
}

TelegraphTrace telegraph_trace(const FluctuatorEnsemble& ens, double temperature, double sample_rate,
                               double duration, std::uint64_t seed, std::size_t sample_cap)
{
    if (!(sample_rate > 0) || !(duration > 0))
        throw InputError("sample rate and duration must be positive");
    const double n_samples_real = std::floor(duration * sample_rate);
    if (n_samples_real > static_cast<double>(sample_cap)) {
        throw ResourceError("trace of " + std::to_string(static_cast<unsigned long long>(n_samples_real)) + " samples exceeds the cap of "
                            + std::to_string(sample_cap));
    }
    const auto n_samples = static_cast<std::size_t>(n_samples_real);
    if (n_samples < 2)
        throw InputError("trace must contain at least two samples");

    TelegraphTrace trace;
    trace.sample_rate = sample_rate;
    trace.seed = seed;
    trace.values.assign(n_samples, 0.0);
    trace.flips.assign(ens.size(), 0);

    const double dt = 1.0 / sample_rate;
    const auto energies = ens.energies();
    const auto amps = ens.amplitudes();

    for (std::size_t i = 0; i < ens.size(); ++i) {
        Rng rng(seed, trace_stream_offset + i);
        const auto sw = switching_time(energies[i], temperature, ens.tau0());
        const double rate = 1.0 / (2.0 * sw.tau);
        double state = rng.bernoulli(0.5) ? 1.0 : -1.0;
        double next_flip = rng.exponential(rate);
        std::size_t flips = 0;
        for (std::size_t k = 0; k < n_samples; ++k) {
            const double t = static_cast<double>(k) * dt;
            while (next_flip <= t) {
                state = -state;
                ++flips;
                next_flip += rng.exponential(rate);
            }
            trace.values[k] += amps[i] * state;
        }
        trace.flips[i] = flips;
    }
    return trace;
}

} // namespace fieldnoise
