#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fieldnoise/dataset.hpp"

namespace fieldnoise {

struct DuttaHornParams {
    double beta = 3.6;
    double t0 = 46.0;  // K
    double s0 = 1.0;   // spectrum scale at the reference point
    double tau0 = 1e-12; // s
    double e_min = 10.0;   // K
    double e_max = 3000.0; // K

    void validate() const;
};

/// Shape of the activation-energy density D(E).
///
/// power_law:            D(E) = E^(beta-1)
/// power_law_with_floor: D(E) = E^(beta-1) + E0^beta / E, with E0 = t0 ln(1/(omega_ref tau0)).
///
/// The 1/E term is the temperature-independent part: in the activated-process
/// approximation S(omega_ref, T) ~ (T/omega) D(T ln(1/omega tau0)) it turns the
/// pure T^beta law into s0 (1 + (T/t0)^beta), the empirical form whose
/// logarithmic temperature derivative enters the alpha(T) formula.
enum class ActivationDensity { power_law, power_law_with_floor };

/// Point at which the model is pinned to a caller-chosen value.
struct SpectrumReference {
    double omega = 0.0;       // rad/s
    double temperature = 0.0; // K
    double value = 0.0;
};

inline constexpr double default_reference_frequency = 1e6; // Hz

/// Default reference: omega = 2 pi * 1 MHz, T = t0, value = s0 (1 + 1) with the
/// floor and s0 without it, i.e. the empirical curve evaluated at T = t0.
SpectrumReference default_reference(const DuttaHornParams& p, ActivationDensity density);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Normalised activated-ensemble spectrum C * int D(E) tau/(1 + omega^2 tau^2) dE.
/// Immutable after construction; safe to share across threads.
class DuttaHornModel {
public:
    explicit DuttaHornModel(const DuttaHornParams& p,
                            ActivationDensity density = ActivationDensity::power_law_with_floor);
    DuttaHornModel(const DuttaHornParams& p, ActivationDensity density, const SpectrumReference& ref);

    /// Throws NumericalError when the quadrature misses the 1e-8 relative tolerance.
    double spectrum(double omega, double temperature) const;

    /// Unnormalised integral with its error estimate.
    QuadratureResult raw_integral(double omega, double temperature) const;

    /// Natural log of D(E), unnormalised.
    double log_density(double energy) const;

    const DuttaHornParams& params() const noexcept { return p_; }
    ActivationDensity density() const noexcept { return density_; }
    double normalisation() const noexcept { return norm_; }
    double floor_energy() const noexcept { return e_floor_; }

private:
    DuttaHornParams p_;
    ActivationDensity density_;
    double e_floor_ = 0.0;
    double norm_ = 1.0;
};

inline constexpr double spectrum_relative_tolerance = 1e-8;

/// Convenience wrapper around DuttaHornModel::spectrum with the default reference.
double spectrum_integral(const DuttaHornParams& p, double omega, double temperature,
                         ActivationDensity density = ActivationDensity::power_law_with_floor);

/// alpha = 1 - (1/ln(omega tau0)) (beta (T/t0)^beta / (1 + (T/t0)^beta) - 1).
/// Requires omega * tau0 < 1; otherwise DomainError.
double model_alpha(const DuttaHornParams& p, double omega, double temperature);

/// T1 = t0 / (beta - 1)^(1/beta), where model_alpha crosses 1. Requires beta > 1.
double crossover_temperature(const DuttaHornParams& p);

struct ResistivitySample {
    double temperature = 0.0; // K
    double rho = 0.0;         // ohm m
};

class ResistivityCurve {
public:
    explicit ResistivityCurve(std::vector<ResistivitySample> samples);

    /// Linear interpolation; DomainError outside the sampled range.
    double at(double temperature) const;

    std::span<const ResistivitySample> samples() const noexcept { return samples_; }

private:
    std::vector<ResistivitySample> samples_;
};

ResistivityCurve read_resistivity_csv(std::istream& in);
ResistivityCurve read_resistivity_csv(const std::filesystem::path& path);

/// Johnson-like scaling S(T) ~ rho(T) T, normalised to 1 at the smallest grid
/// temperature. Frequencies are set to the 1 MHz reference; errors are zero.
NoiseDataset johnson_prediction(const ResistivityCurve& rho, std::span<const double> temperatures);

} // namespace fieldnoise
