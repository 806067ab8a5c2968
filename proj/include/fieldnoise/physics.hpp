#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fieldnoise {

/// CODATA 2018 exact / recommended values, SI.
namespace si {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double boltzmann = 1.380649e-23;        // J/K
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
} // namespace si

struct PhysicalContext {
    double ion_mass = 88.0 * si::atomic_mass_unit;
    double ion_charge = si::elementary_charge;
    double hbar = si::hbar;
    double k_b = si::boltzmann;

    /// Singly charged 88Sr.
    static PhysicalContext strontium88() { return {}; }

    void validate() const;
};

struct SidebandPoint {
    double delay = 0.0; // s
    double p_bsb = 0.0;
    double p_rsb = 0.0;
    std::size_t trials = 1;
};

struct SidebandSeries {
    std::vector<SidebandPoint> points;
    double trap_frequency = 0.0; // Hz

    /// Throws InputError when delays are not strictly increasing or a point is out of range.
    void validate() const;
};

struct PhononNumber {
    double n = 0.0;
    double n_err = 0.0;
};

/// Binomial standard error sqrt(p(1-p)/N), floored at 1/(2N).
double binomial_error(double p, std::size_t trials);

/// Mean phonon number n = P_rsb / (P_bsb - P_rsb).
/// Throws DegenerateThermometry when p_bsb <= p_rsb.
double phonon_number(double p_bsb, double p_rsb);

/// Phonon number with the binomial errors of both probabilities propagated.
PhononNumber phonon_number(const SidebandPoint& point);

struct LineFit {
    double slope = 0.0;
    double slope_err = 0.0;
    double intercept = 0.0;
    double intercept_err = 0.0;
};

/// Weighted linear least squares y = intercept + slope * x with weights 1/sigma^2.
/// Standard errors assume the sigmas are absolute (not rescaled by chi^2).
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> sigma);

struct HeatingRate {
    double n_dot = 0.0;     // quanta/s
    double n_dot_err = 0.0; // quanta/s
    double n_initial = 0.0;
    std::vector<std::size_t> skipped; // indices of thermometry-degenerate points
};

/// Heating rate as the weighted slope of n against delay. Points with
/// p_bsb <= p_rsb are skipped and reported; fewer than two usable points
/// throws InsufficientData.
HeatingRate heating_rate(const SidebandSeries& series);

/// S_E(f) = 4 m hbar (2 pi f) n_dot / q^2, in V^2/m^2/Hz.
double field_noise_from_heating(double n_dot, double frequency, const PhysicalContext& ctx = {});

/// Rescales a spectral density measured at f_from to f_to assuming S ~ f^-exponent.
double rescale_frequency(double s_e, double f_from, double f_to, double exponent = 1.0);

} // namespace fieldnoise
