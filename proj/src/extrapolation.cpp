#include "fieldnoise/extrapolation.hpp"

#include "json.hpp"

#include <cmath>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/error.hpp"

namespace fieldnoise {

void ScalingLaw::validate() const
{
    if (!(reference > 0))
        throw InputError("scaling-law reference must be positive");
    if (!std::isfinite(distance_exponent) || !std::isfinite(frequency_exponent))
        throw InputError("scaling-law exponents must be finite");
}

void CantileverConfig::validate() const
{
    if (!(gamma > 0 && capacitance > 0 && voltage > 0 && temperature > 0))
        throw InputError("cantilever gamma, capacitance, voltage and temperature must be positive");
}

double scale_noise(const ScalingLaw& law, double distance, double frequency)
{
    law.validate();
    if (!(distance > 0 && frequency > 0))
        throw InputError("distance and frequency must be positive");
    return law.reference * std::pow(distance, -law.distance_exponent) * std::pow(frequency, -law.frequency_exponent);
}

double dc_field_fluctuation(const ScalingLaw& law, double distance, double tau, double tau0)
{
    law.validate();
    if (law.frequency_exponent != 1.0)
        throw DomainError("DC extrapolation is only defined for a pure 1/f spectrum (frequency exponent 1)");
    if (!(distance > 0))
        throw InputError("distance must be positive");
    if (!(tau0 > 0 && tau > tau0))
        throw InputError("averaging time must satisfy tau > tau0 > 0");
    const double s_times_f = law.reference * std::pow(distance, -law.distance_exponent);
    return std::sqrt(s_times_f * std::log(tau / tau0));
}

double patch_product(double sigma_e, double distance)
{
    if (!(sigma_e >= 0 && distance > 0))
        throw InputError("patch product needs sigma_E >= 0 and d > 0");
    const double d2 = distance * distance;
    return sigma_e * sigma_e * d2 * d2;
}

double cantilever_field_noise(const CantileverConfig& cfg, double k_b)
{
    cfg.validate();
    if (!(k_b > 0))
        throw InputError("k_B must be positive");
    const double cv = cfg.capacitance * cfg.voltage;
    return 4.0 * k_b * cfg.temperature * cfg.gamma / (cv * cv);
}

const ComparisonConstant& ComparisonConstants::at(std::string_view name) const
{
    const auto it = entries.find(name);
    if (it == entries.end())
        throw InputError("comparison constant '" + std::string(name) + "' not found");
    return it->second;
}

ComparisonConstants parse_comparison_constants(std::string_view json_text)
{
    ComparisonConstants out;
    try {
        const auto doc = nlohmann::json::parse(json_text);
        out.version = doc.at("version").get<int>();
        for (const auto& [name, entry] : doc.at("constants").items()) {
            out.entries[name] = {entry.at("value").get<double>(), entry.at("units").get<std::string>(),
                                 entry.at("source").get<std::string>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("comparison constants: ") + e.what());
    }
    return out;
}

const ComparisonConstants& builtin_comparison_constants()
{
    static const ComparisonConstants constants = parse_comparison_constants(builtin_comparison_constants_json());
    return constants;
}

ExtrapolationReport extrapolate(const ScalingLaw& law, const ExtrapolationQuery& query,
                                const ComparisonConstants& constants, double k_b)
{
    ExtrapolationReport rep;
    rep.law = law;
    rep.query = query;
    rep.s_e = scale_noise(law, query.distance, query.frequency);

    if (law.frequency_exponent == 1.0) {
        const double sigma = dc_field_fluctuation(law, query.distance, query.averaging_time, query.tau0);
        rep.sigma_e = sigma;
        rep.sigma_v2_a = patch_product(sigma, query.distance);

        // The static-field value is quoted at 1 um with a d^-4 variance, i.e. sigma ~ d^-2.
        const double static_1um = constants.at("static_field_sigma_e_1um").value;
        const double ratio_d = 1e-6 / query.distance;
        rep.static_field_ratio = static_1um * ratio_d * ratio_d / sigma;
        rep.patch_ratio = *rep.sigma_v2_a / constants.at("contact_potential_sigma_v2_a").value;
        rep.notes.push_back("static patch field exceeds the extrapolated fluctuation by a factor "
                            + format_double(*rep.static_field_ratio));
    } else {
        rep.notes.push_back("DC extrapolation skipped: frequency exponent is not 1");
    }

    if (query.cantilever) {
        rep.cantilever_s_e = cantilever_field_noise(*query.cantilever, k_b);
        rep.cantilever_ratio = *rep.cantilever_s_e / rep.s_e;
        const double factor = constants.at("cantilever_agreement_factor").value;
        rep.cantilever_within_agreement = *rep.cantilever_ratio <= factor && *rep.cantilever_ratio >= 1.0 / factor;
        rep.notes.push_back(*rep.cantilever_within_agreement
                                ? "cantilever noise agrees with the trap extrapolation within an order of magnitude"
                                : "cantilever noise differs from the trap extrapolation by more than an order of "
                                  "magnitude");
    }
    return rep;
}

} // namespace fieldnoise
