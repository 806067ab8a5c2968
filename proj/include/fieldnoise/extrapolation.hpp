#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fieldnoise {

/// S_E = reference * d^-distance_exponent * f^-frequency_exponent.
struct ScalingLaw {
    double distance_exponent = 4.0;
    double frequency_exponent = 1.0;
    double reference = 1e-21; // V^2 m^2 for the default exponents

    void validate() const;
};

struct CantileverConfig {
    double gamma = 0.0;       // kg/s
    double capacitance = 0.0; // F
    double voltage = 0.0;     // V
    double temperature = 0.0; // K

    void validate() const;
};

struct PatchStatistics {
    double sigma_e = 0.0;      // V/m
    double sigma_v2_a = 0.0;   // V^2 m^2
    double averaging_time = 0.0; // s
};

double scale_noise(const ScalingLaw& law, double distance, double frequency);

/// sigma_E = sqrt(S_E f ln(tau/tau0)). Only defined for a pure 1/f law, where
/// S_E f does not depend on f; other frequency exponents throw DomainError.
double dc_field_fluctuation(const ScalingLaw& law, double distance, double tau, double tau0);

/// sigma_V^2 A_patch ~ sigma_E^2 d^4.
double patch_product(double sigma_e, double distance);

/// S_E = 4 k_B T Gamma / (C V)^2.
double cantilever_field_noise(const CantileverConfig& cfg, double k_b);

struct ComparisonConstant {
    double value = 0.0;
    std::string units;
    std::string source;
};

/// Literature comparison values keyed by name, parsed from the constants JSON.
struct ComparisonConstants {
    int version = 0;
    std::map<std::string, ComparisonConstant, std::less<>> entries;

    const ComparisonConstant& at(std::string_view name) const;
};

ComparisonConstants parse_comparison_constants(std::string_view json_text);

/// The constants file compiled into the library.
const ComparisonConstants& builtin_comparison_constants();
std::string_view builtin_comparison_constants_json();

struct ExtrapolationQuery {
    double distance = 1e-6;       // m
    double frequency = 1e4;       // Hz
    double averaging_time = 1.0;  // s
    double tau0 = 1e-12;          // s
    std::optional<CantileverConfig> cantilever;
};

struct ExtrapolationReport {
    ScalingLaw law;
    ExtrapolationQuery query;
    double s_e = 0.0;
    std::optional<double> sigma_e; // absent when the law is not 1/f
    std::optional<double> sigma_v2_a;
    std::optional<double> static_field_ratio;     // literature static sigma_E / extrapolated sigma_E
    std::optional<double> patch_ratio;            // extrapolated / contact-potential sigma_V^2 A
    std::optional<double> cantilever_s_e;
    std::optional<double> cantilever_ratio;       // cantilever / trap extrapolation at the same (d, f)
    std::optional<bool> cantilever_within_agreement;
    std::vector<std::string> notes;
};

ExtrapolationReport extrapolate(const ScalingLaw& law, const ExtrapolationQuery& query,
                                const ComparisonConstants& constants = builtin_comparison_constants(),
                                double k_b = 1.380649e-23);

} // namespace fieldnoise
