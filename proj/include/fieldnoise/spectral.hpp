#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/ensemble.hpp"

namespace fieldnoise {

enum class Window { rectangular, hann };

Window parse_window(std::string_view name);
std::string_view to_string(Window w);

/// One-sided Welch estimate. The DC bin is omitted so every frequency is positive.
struct PsdEstimate {
    std::vector<double> frequencies; // Hz
    std::vector<double> psd;         // units^2/Hz
    std::size_t segments = 0;
    Window window = Window::hann;
    double resolution = 0.0; // Hz, bin spacing
};

/// Averaged modified periodogram over 50%-overlapping segments of
/// segment_length samples (a power of two). Each segment has its mean removed
/// before windowing; the normalisation divides by the window power so that
/// sum(psd) * resolution estimates the variance.
PsdEstimate estimate_psd(std::span<const double> samples, double sample_rate, std::size_t segment_length,
                         Window window = Window::hann);
PsdEstimate estimate_psd(const TelegraphTrace& trace, std::size_t segment_length, Window window = Window::hann);

/// Least-squares line through (ln x, ln y).
struct LogLogFit {
    double slope = 0.0;
    double slope_err = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
    std::size_t n_points = 0;
};

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct AlphaFit {
    double alpha = 0.0;
    double alpha_err = 0.0;
    double prefactor = 0.0; // S = prefactor * f^-alpha with f in Hz
    double f_lo = 0.0;
    double f_hi = 0.0;
    std::size_t n_points = 0;
};

/// Fits S = prefactor * f^-alpha over points with f_lo <= f <= f_hi.
/// Needs at least three points; any non-positive S in the band throws DomainError.
AlphaFit fit_alpha(std::span<const double> frequencies, std::span<const double> spectrum, double f_lo, double f_hi);
AlphaFit fit_alpha(const PsdEstimate& psd, double f_lo, double f_hi);
AlphaFit fit_alpha(const NoiseDataset& data, double f_lo, double f_hi);

} // namespace fieldnoise
