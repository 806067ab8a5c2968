#include "fieldnoise/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fieldnoise/error.hpp"

namespace fieldnoise {

void PhysicalContext::validate() const
{
    if (!(ion_mass > 0 && ion_charge > 0 && hbar > 0 && k_b > 0))
        throw InputError("physical constants must be strictly positive");
}

void SidebandSeries::validate() const
{
    if (!(trap_frequency > 0))
        throw InputError("trap frequency must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        if (!(p.p_bsb >= 0 && p.p_bsb <= 1 && p.p_rsb >= 0 && p.p_rsb <= 1))
            throw InputError("sideband point " + std::to_string(i) + ": probabilities must lie in [0, 1]");
        if (p.trials < 1)
            throw InputError("sideband point " + std::to_string(i) + ": trials must be >= 1");
        if (!(p.delay >= 0))
            throw InputError("sideband point " + std::to_string(i) + ": delay must be >= 0");
        if (i > 0 && !(p.delay > points[i - 1].delay))
            throw InputError("sideband delays must be strictly increasing");
    }
}

double binomial_error(double p, std::size_t trials)
{
    const double n = static_cast<double>(trials);
    return std::max(std::sqrt(p * (1.0 - p) / n), 0.5 / n);
}

double phonon_number(double p_bsb, double p_rsb)
{
    if (!(p_bsb >= 0 && p_bsb <= 1 && p_rsb >= 0 && p_rsb <= 1))
        throw InputError("sideband probabilities must lie in [0, 1]");
    if (!(p_bsb > p_rsb))
        throw DegenerateThermometry("P_bsb must exceed P_rsb >= 0 (phonon number outside the thermometry range)");
    return p_rsb / (p_bsb - p_rsb);
}

PhononNumber phonon_number(const SidebandPoint& point)
{
    const double n = phonon_number(point.p_bsb, point.p_rsb);
    const double d = point.p_bsb - point.p_rsb;
    const double sb = binomial_error(point.p_bsb, point.trials);
    const double sr = binomial_error(point.p_rsb, point.trials);
    // dn/dP_rsb = P_bsb / d^2, dn/dP_bsb = -P_rsb / d^2
    const double err = std::hypot(point.p_bsb * sr, point.p_rsb * sb) / (d * d);
    return {n, err};
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> sigma)
{
    if (x.size() != y.size() || x.size() != sigma.size())
        throw InputError("line fit: mismatched input lengths");
    if (x.size() < 2)
        throw InsufficientData("line fit needs at least two points");

    // Centre x on its weighted mean so the normal equations stay well conditioned.
    double sw = 0, swx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(sigma[i] > 0))
            throw InputError("line fit: sigma must be positive");
        const double w = 1.0 / (sigma[i] * sigma[i]);
        sw += w;
        swx += w * x[i];
    }
    const double xbar = swx / sw;
    double sxx = 0, sxy = 0, swy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = 1.0 / (sigma[i] * sigma[i]);
        const double dx = x[i] - xbar;
        sxx += w * dx * dx;
        sxy += w * dx * (y[i] - y[0]); // sum(w dx) = 0, so any offset works; y[0] keeps flat data exact
        swy += w * y[i];
    }
    if (!(sxx > 0))
        throw InsufficientData("line fit: abscissae are all identical");

    LineFit fit;
    fit.slope = sxy / sxx;
    const double ybar = swy / sw;
    fit.intercept = ybar - fit.slope * xbar;
    fit.slope_err = std::sqrt(1.0 / sxx);
    fit.intercept_err = std::sqrt(1.0 / sw + xbar * xbar / sxx);
    return fit;
}

HeatingRate heating_rate(const SidebandSeries& series)
{
    series.validate();
    HeatingRate out;
    std::vector<double> t, n, err;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        if (!(p.p_bsb > p.p_rsb)) {
            out.skipped.push_back(i);
            continue;
        }
        const auto pn = phonon_number(p);
        t.push_back(p.delay);
        n.push_back(pn.n);
        err.push_back(pn.n_err);
    }
    if (t.size() < 2)
        throw InsufficientData("heating rate needs at least two valid sideband points, got " + std::to_string(t.size()));

    const auto fit = weighted_line_fit(t, n, err);
    out.n_dot = fit.slope;
    out.n_dot_err = fit.slope_err;
    out.n_initial = fit.intercept;
    return out;
}

double field_noise_from_heating(double n_dot, double frequency, const PhysicalContext& ctx)
{
    if (!(frequency > 0))
        throw InputError("trap frequency must be positive");
    if (!(n_dot >= 0))
        throw InputError("heating rate must be non-negative");
    const double omega = 2.0 * std::numbers::pi * frequency;
    return 4.0 * ctx.ion_mass * ctx.hbar * omega * n_dot / (ctx.ion_charge * ctx.ion_charge);
}

double rescale_frequency(double s_e, double f_from, double f_to, double exponent)
{
    if (!(f_from > 0 && f_to > 0))
        throw InputError("frequencies must be positive");
    if (f_from == f_to)
        return s_e;
    return s_e * std::pow(f_from / f_to, exponent);
}

} // namespace fieldnoise
