#include "fieldnoise/spectral.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "fieldnoise/error.hpp"

namespace fieldnoise {

namespace {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* p) const noexcept { fftw_destroy_plan(p); }
};
struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

std::vector<double> make_window(Window window, std::size_t n)
{
    std::vector<double> w(n, 1.0);
    if (window == Window::hann) {
        // periodic Hann, the usual choice for spectral averaging
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

} // namespace

Window parse_window(std::string_view name)
{
    if (name == "hann")
        return Window::hann;
    if (name == "rectangular" || name == "rect")
        return Window::rectangular;
    throw InputError("unknown window '" + std::string(name) + "' (expected hann or rectangular)");
}

std::string_view to_string(Window w)
{
    return w == Window::hann ? "hann" : "rectangular";
}

PsdEstimate estimate_psd(std::span<const double> samples, double sample_rate, std::size_t segment_length,
                         Window window)
{
    if (!(sample_rate > 0))
        throw InputError("sample rate must be positive");
    if (segment_length < 4 || !std::has_single_bit(segment_length))
        throw InputError("segment length must be a power of two >= 4");
    if (samples.size() < segment_length) {
        throw InsufficientData("trace of " + std::to_string(samples.size()) + " samples is shorter than one segment of "
                               + std::to_string(segment_length));
    }

    const std::size_t n = segment_length;
    const std::size_t step = n / 2;
    const std::size_t n_segments = (samples.size() - n) / step + 1;
    const auto w = make_window(window, n);
    double window_power = 0.0;
    for (double v : w)
        window_power += v * v;

    std::unique_ptr<double, FftwFree> in(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
    std::unique_ptr<fftw_complex, FftwFree> out(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1))));
    if (!in || !out)
        throw ResourceError("fftw_malloc failed");
    std::unique_ptr<fftw_plan_s, FftwPlanDeleter> plan(
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE));

    std::vector<double> accum(n / 2 + 1, 0.0);
    for (std::size_t s = 0; s < n_segments; ++s) {
        const auto seg = samples.subspan(s * step, n);
        double mean = 0.0;
        for (double v : seg)
            mean += v;
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
            in.get()[i] = (seg[i] - mean) * w[i];
        fftw_execute(plan.get());
        for (std::size_t k = 0; k <= n / 2; ++k) {
            const double re = out.get()[k][0];
            const double im = out.get()[k][1];
            accum[k] += re * re + im * im;
        }
    }

    PsdEstimate est;
    est.segments = n_segments;
    est.window = window;
    est.resolution = sample_rate / static_cast<double>(n);
    const double norm = 1.0 / (sample_rate * window_power * static_cast<double>(n_segments));
    for (std::size_t k = 1; k <= n / 2; ++k) {
        const double one_sided = (k == n / 2) ? 1.0 : 2.0;
        est.frequencies.push_back(static_cast<double>(k) * est.resolution);
        est.psd.push_back(one_sided * accum[k] * norm);
    }
    return est;
}

PsdEstimate estimate_psd(const TelegraphTrace& trace, std::size_t segment_length, Window window)
{
    return estimate_psd(trace.values, trace.sample_rate, segment_length, window);
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw InputError("log-log fit: mismatched input lengths");
    const std::size_t n = x.size();
    if (n < 2)
        throw InsufficientData("log-log fit needs at least two points");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0) || !(y[i] > 0))
            throw DomainError("log-log fit: non-positive value at point " + std::to_string(i));
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0))
        throw InsufficientData("log-log fit: abscissae are all identical");

    LogLogFit fit;
    fit.n_points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        rss += r * r;
    }
    fit.residual_rms = std::sqrt(rss / static_cast<double>(n));
    fit.slope_err = n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    return fit;
}

AlphaFit fit_alpha(std::span<const double> frequencies, std::span<const double> spectrum, double f_lo, double f_hi)
{
    if (!(f_lo < f_hi))
        throw InputError("fit band must satisfy f_lo < f_hi");
    if (frequencies.size() != spectrum.size())
        throw InputError("frequency and spectrum lengths differ");
    std::vector<double> f, s;
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        if (frequencies[i] < f_lo || frequencies[i] > f_hi)
            continue;
        if (!(spectrum[i] > 0))
            throw DomainError("spectrum is non-positive at f = " + format_double(frequencies[i]) + " Hz");
        f.push_back(frequencies[i]);
        s.push_back(spectrum[i]);
    }
    if (f.size() < 3)
        throw InsufficientData("alpha fit needs at least three points in band, got " + std::to_string(f.size()));

    const auto line = fit_loglog(f, s);
    return {-line.slope, line.slope_err, std::exp(line.intercept), f_lo, f_hi, line.n_points};
}

AlphaFit fit_alpha(const PsdEstimate& psd, double f_lo, double f_hi)
{
    return fit_alpha(psd.frequencies, psd.psd, f_lo, f_hi);
}

AlphaFit fit_alpha(const NoiseDataset& data, double f_lo, double f_hi)
{
    for (const auto& smp : data.samples)
        if (smp.temperature != data.samples.front().temperature)
            throw InputError("frequency exponent needs a single-temperature spectrum; dataset mixes temperatures");
    const auto f = data.frequencies();
    const auto s = data.values();
    return fit_alpha(f, s, f_lo, f_hi);
}

} // namespace fieldnoise
