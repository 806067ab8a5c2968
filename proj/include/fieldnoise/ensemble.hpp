#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fieldnoise {

/// Parameters of an activated-fluctuator population. Energies are E/k_B in kelvin.
struct EnsembleConfig {
    double beta = 3.6;
    double e_min = 10.0;   // K
    double e_max = 3000.0; // K
    double tau0 = 1e-12;   // s
    std::size_t n_fluctuators = 10000;
    double amplitude = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Immutable sampled population. Each fluctuator switches between -a and +a.
class FluctuatorEnsemble {
public:
    FluctuatorEnsemble(std::vector<double> energies, std::vector<double> amplitudes, double tau0);

    std::span<const double> energies() const noexcept { return energies_; }
    std::span<const double> amplitudes() const noexcept { return amplitudes_; }
    double tau0() const noexcept { return tau0_; }
    std::size_t size() const noexcept { return energies_.size(); }

    /// Sum of a_i^2: the total variance of the summed signal.
    double total_power() const noexcept;

    /// Same energies with every amplitude multiplied by factor.
    FluctuatorEnsemble scaled(double factor) const;

private:
    std::vector<double> energies_;
    std::vector<double> amplitudes_;
    double tau0_;
};

/// Draws energies from D(E) ~ E^(beta-1) on [e_min, e_max] by inverse CDF.
/// Fluctuator i uses its own generator stream (seed, i), so the result does not
/// depend on evaluation order.
FluctuatorEnsemble sample_ensemble(const EnsembleConfig& cfg);

/// Inverse CDF of the truncated power-law activation density.
double activation_energy_quantile(double u, double beta, double e_min, double e_max);

inline constexpr double max_switching_time = 1e30; // s

struct SwitchingTime {
    double tau = 0.0;
    bool saturated = false;
};

/// tau = tau0 exp(E/T), capped at max_switching_time.
SwitchingTime switching_time(double energy, double temperature, double tau0);

/// tau / (1 + (omega tau)^2) evaluated without forming tau, for ln(omega tau) of any size.
double lorentzian_kernel(double omega, double log_omega_tau);

/// One-sided S(f) = sum_i 4 a_i^2 tau_i / (1 + (2 pi f tau_i)^2), summed in index order.
std::vector<double> ensemble_spectrum(const FluctuatorEnsemble& ens, double temperature,
                                      std::span<const double> frequencies);

/// Rescales all amplitudes so the spectrum equals target at (temperature, frequency).
FluctuatorEnsemble calibrate_ensemble(const FluctuatorEnsemble& ens, double temperature, double frequency,
                                      double target);

struct TelegraphTrace {
    double sample_rate = 0.0; // Hz
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::vector<std::size_t> flips; // per fluctuator, over the trace duration
};

inline constexpr std::size_t default_trace_sample_cap = std::size_t{1} << 26;

/// Time-domain realisation: every fluctuator is a symmetric two-state Markov
/// chain with flip rate 1/(2 tau_i) out of each state, started from its
/// stationary distribution and simulated with exact exponential waiting times.
/// Throws ResourceError when duration * sample_rate exceeds sample_cap.
TelegraphTrace telegraph_trace(const FluctuatorEnsemble& ens, double temperature, double sample_rate,
                               double duration, std::uint64_t seed,
                               std::size_t sample_cap = default_trace_sample_cap);

} // namespace fieldnoise
