#include "fieldnoise/dutta_horn.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "fieldnoise/ensemble.hpp"
#include "fieldnoise/error.hpp"

namespace fieldnoise {

namespace {

double log_add_exp(double a, double b)
{
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// beta x / (1 + x) with x = (T/t0)^beta, evaluated without overflow.
double activation_term(double beta, double t, double t0)
{
    const double z = beta * std::log(t / t0);
    return beta / (1.0 + std::exp(-z));
}

} // namespace

void DuttaHornParams::validate() const
{
    if (!(beta > 0))
        throw InputError("beta must be positive");
    if (!(t0 > 0))
        throw InputError("t0 must be positive");
    if (!(tau0 > 0))
        throw InputError("tau0 must be positive");
    if (!(e_min > 0 && e_min < e_max))
        throw InputError("energy window must satisfy 0 < e_min < e_max");
    if (!(s0 > 0))
        throw InputError("s0 must be positive");
}

SpectrumReference default_reference(const DuttaHornParams& p, ActivationDensity density)
{
    const double value = density == ActivationDensity::power_law_with_floor ? 2.0 * p.s0 : p.s0;
    return {2.0 * std::numbers::pi * default_reference_frequency, p.t0, value};
}

DuttaHornModel::DuttaHornModel(const DuttaHornParams& p, ActivationDensity density)
    : DuttaHornModel(p, density, default_reference(p, density))
{
}

DuttaHornModel::DuttaHornModel(const DuttaHornParams& p, ActivationDensity density, const SpectrumReference& ref)
    : p_(p), density_(density)
{
    p_.validate();
    if (!(ref.omega > 0 && ref.temperature > 0 && ref.value > 0))
        throw InputError("spectrum reference must have positive omega, temperature and value");
    if (!(ref.omega * p_.tau0 < 1))
        throw DomainError("reference frequency must satisfy omega tau0 < 1");
    e_floor_ = p_.t0 * std::log(1.0 / (ref.omega * p_.tau0));
    const auto raw = raw_integral(ref.omega, ref.temperature);
    if (!(raw.value > 0))
        throw NumericalError("spectrum vanishes at the reference point");
    norm_ = ref.value / raw.value;
}

double DuttaHornModel::log_density(double energy) const
{
    const double log_e = std::log(energy);
    const double power = (p_.beta - 1.0) * log_e;
    if (density_ == ActivationDensity::power_law)
        return power;
    return log_add_exp(power, p_.beta * std::log(e_floor_) - log_e);
}

QuadratureResult DuttaHornModel::raw_integral(double omega, double temperature) const
{
    if (!(omega > 0))
        throw InputError("omega must be positive");
    if (!(temperature > 0))
        throw InputError("temperature must be positive");

    // Integrate in u = E/T. The kernel peaks at u = ln(1/(omega tau0)) and falls
    // off as exp(-|u - peak|), so break the range around the peak.
    const double log_omega_tau0 = std::log(omega * p_.tau0);
    const double u_lo = p_.e_min / temperature;
    const double u_hi = p_.e_max / temperature;
    const double peak = -log_omega_tau0;

    auto integrand = [&](double u) {
        const double e = u * temperature;
        return temperature * std::exp(log_density(e)) * lorentzian_kernel(omega, log_omega_tau0 + u);
    };

    std::vector<double> breaks{u_lo};
    for (double offset : {-40.0, -12.0, -4.0, 0.0, 4.0, 12.0, 40.0}) {
        const double b = peak + offset;
        if (b > breaks.back() && b < u_hi)
            breaks.push_back(b);
    }
    breaks.push_back(u_hi);

    using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
    QuadratureResult total;
    double l1_total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double err = 0.0;
        double l1 = 0.0;
        total.value += Quad::integrate(integrand, breaks[i], breaks[i + 1], 20, 1e-11, &err, &l1);
        total.error_estimate += err;
        l1_total += l1;
    }
    if (!std::isfinite(total.value) || total.error_estimate > spectrum_relative_tolerance * std::abs(total.value)) {
        std::ostringstream msg;
        msg << "spectrum quadrature did not converge: omega=" << omega << " T=" << temperature
            << " value=" << total.value << " error=" << total.error_estimate << " L1=" << l1_total
            << " intervals=" << breaks.size() - 1;
        throw NumericalError(msg.str());
    }
    return total;
}

double DuttaHornModel::spectrum(double omega, double temperature) const
{
    return norm_ * raw_integral(omega, temperature).value;
}

double spectrum_integral(const DuttaHornParams& p, double omega, double temperature, ActivationDensity density)
{
    return DuttaHornModel(p, density).spectrum(omega, temperature);
}

double model_alpha(const DuttaHornParams& p, double omega, double temperature)
{
    if (!(temperature > 0))
        throw InputError("temperature must be positive");
    if (!(p.t0 > 0 && p.beta > 0 && p.tau0 > 0))
        throw InputError("beta, t0 and tau0 must be positive");
    const double x = omega * p.tau0;
    if (!(x > 0) || !(x < 1))
        throw DomainError("model_alpha requires 0 < omega tau0 < 1");
    const double log_x = std::log(x);
    return 1.0 - (activation_term(p.beta, temperature, p.t0) - 1.0) / log_x;
}

double crossover_temperature(const DuttaHornParams& p)
{
    if (!(p.beta > 1))
        throw DomainError("no crossover temperature for beta <= 1");
    if (!(p.t0 > 0))
        throw InputError("t0 must be positive");
    return p.t0 / std::pow(p.beta - 1.0, 1.0 / p.beta);
}

ResistivityCurve::ResistivityCurve(std::vector<ResistivitySample> samples) : samples_(std::move(samples))
{
    if (samples_.size() < 2)
        throw InputError("resistivity curve needs at least two samples");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!(samples_[i].rho > 0))
            throw InputError("resistivity must be positive");
        if (!(samples_[i].temperature > 0))
            throw InputError("resistivity temperatures must be positive");
        if (i > 0 && !(samples_[i].temperature > samples_[i - 1].temperature))
            throw InputError("resistivity temperatures must be strictly increasing");
    }
}

double ResistivityCurve::at(double temperature) const
{
    if (temperature < samples_.front().temperature || temperature > samples_.back().temperature) {
        throw DomainError("temperature " + format_double(temperature) + " K outside resistivity table ["
                          + format_double(samples_.front().temperature) + ", "
                          + format_double(samples_.back().temperature) + "] K");
    }
    const auto it = std::lower_bound(samples_.begin(), samples_.end(), temperature,
                                     [](const ResistivitySample& s, double t) { return s.temperature < t; });
    if (it->temperature == temperature)
        return it->rho;
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (temperature - lo.temperature) / (hi.temperature - lo.temperature);
    return lo.rho + w * (hi.rho - lo.rho);
}

ResistivityCurve read_resistivity_csv(std::istream& in)
{
    std::vector<ResistivitySample> samples;
    for (const auto& row : read_numeric_csv(in, resistivity_csv_header, "<resistivity csv>"))
        samples.push_back({row[0], row[1]});
    return ResistivityCurve(std::move(samples));
}

ResistivityCurve read_resistivity_csv(const std::filesystem::path& path)
{
    std::istringstream in(read_file(path));
    return read_resistivity_csv(in);
}

NoiseDataset johnson_prediction(const ResistivityCurve& rho, std::span<const double> temperatures)
{
    if (temperatures.empty())
        throw InputError("temperature grid is empty");
    const double t_ref = *std::min_element(temperatures.begin(), temperatures.end());
    const double ref = rho.at(t_ref) * t_ref;
    NoiseDataset out;
    out.label = "johnson";
    for (double t : temperatures)
        out.samples.push_back({t, default_reference_frequency, rho.at(t) * t / ref, 0.0});
    return out;
}

} // namespace fieldnoise
