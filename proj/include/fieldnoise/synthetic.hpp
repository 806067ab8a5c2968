#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/physics.hpp"

namespace fieldnoise::synthetic {

/// n temperatures evenly spaced over [t_lo, t_hi], inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);
/// n values log-spaced over [lo, hi], inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// The grid used for bundled datasets: 12 temperatures over 7-100 K.
std::vector<double> standard_temperatures();

/// S(T) = s0 (1 + (T/t0)^beta) with multiplicative Gaussian noise:
/// S_obs = S (1 + noise * z). The error column is noise * S_obs (0 if noise == 0).
NoiseDataset temp_scaling_dataset(double s0, double t0, double beta, std::span<const double> temperatures,
                                  double noise, std::uint64_t seed, double frequency = 1e6);

/// Arrhenius curve with the same noise model. When frequencies is nonempty the
/// points cycle through it and are stored at that frequency assuming 1/f scaling
/// from the 1 MHz value.
NoiseDataset arrhenius_dataset(double s0, double s_t, double t0, std::span<const double> temperatures,
                               double noise, std::uint64_t seed, std::span<const double> frequencies = {});

/// Sideband series for a thermal state heating at n_dot: P_rsb = c n/(2n+1),
/// P_bsb = c (n+1)/(2n+1), with binomially sampled probabilities when trials > 0.
SidebandSeries sideband_series(double n_dot, double n_initial, std::span<const double> delays, std::size_t trials,
                               double trap_frequency, std::uint64_t seed, double contrast = 0.9,
                               bool sample = true);

} // namespace fieldnoise::synthetic
