#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fieldnoise/dutta_horn.hpp"
#include "fieldnoise/ensemble.hpp"
#include "fieldnoise/extrapolation.hpp"
#include "fieldnoise/fitting.hpp"
#include "fieldnoise/spectral.hpp"

namespace fieldnoise {

/// Parses text as JSON; syntax errors become InputError with "source:line:column".
nlohmann::json parse_json_document(std::string_view text, std::string_view source);

/// Ensemble keys: beta, e_min_K, e_max_K, tau0_s, n, amplitude, seed.
/// Missing keys keep their defaults; wrong types or values name the field.
EnsembleConfig ensemble_config_from_json(const nlohmann::json& doc, std::string_view source);
nlohmann::json to_json(const EnsembleConfig& cfg);

/// Ensemble schema plus t0_K and s0.
DuttaHornParams dutta_horn_params_from_json(const nlohmann::json& doc, std::string_view source);

struct CalibrationPoint {
    double temperature = 0.0;
    double frequency = 0.0;
    double s_e = 0.0;
};

struct TraceRequest {
    double temperature = 0.0;
    double sample_rate = 0.0;
    double duration = 0.0;
};

/// A simulate run: the ensemble plus the grids to evaluate it on.
struct SimulationPlan {
    EnsembleConfig ensemble;
    std::vector<double> temperatures{7, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> frequencies{1e6};
    std::optional<CalibrationPoint> calibration;
    std::optional<TraceRequest> trace;
};

/// Optional keys beyond the ensemble schema: temperatures_K, frequencies_Hz,
/// calibrate {temperature_K, frequency_Hz, SE_V2m2Hz}, trace {temperature_K, sample_rate_Hz, duration_s}.
SimulationPlan simulation_plan_from_json(std::string_view text, std::string_view source);

/// {model, params, errors_1sigma, covariance, chi2_reduced, n_points, converged, iterations, warnings[]}
nlohmann::json fit_report_json(const FitReport& report);

/// {alpha, alpha_err, prefactor, f_lo, f_hi, n_points}
nlohmann::json alpha_report_json(const AlphaFit& fit);

nlohmann::json extrapolation_report_json(const ExtrapolationReport& report,
                                         const ComparisonConstants& constants);

/// Compact JSON followed by a newline; key order is sorted, so output is stable.
std::string dump_json(const nlohmann::json& doc);

} // namespace fieldnoise
