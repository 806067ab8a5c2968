#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/error.hpp"

namespace fieldnoise {

enum class LossSpace { log, linear };
enum class TemperatureModel { temp_scaling, arrhenius };

LossSpace parse_loss_space(std::string_view name);
TemperatureModel parse_temperature_model(std::string_view name);
std::string_view to_string(TemperatureModel model);
std::string_view to_string(LossSpace loss);

using Params3 = std::array<double, 3>;

struct FitOptions {
    LossSpace loss_space = LossSpace::log;
    std::size_t max_iterations = 200;
    double tolerance = 1e-10; // relative step in log-parameters
    std::size_t bootstrap_resamples = 0;
    std::uint64_t seed = 0; // bootstrap streams
    std::optional<Params3> start; // overrides initial_guess

    void validate() const;
};

inline constexpr double condition_warning_threshold = 1e6;
inline constexpr double rank_deficiency_threshold = 1e12;

/// Everything a fit produced, independent of which model was fitted.
struct FitReport {
    TemperatureModel model = TemperatureModel::temp_scaling;
    Params3 params{};
    Params3 errors{};
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d jacobian_covariance = Eigen::Matrix3d::Zero();
    std::string covariance_method = "jacobian";
    double chi2_reduced = 0.0;
    std::size_t n_points = 0;
    bool converged = false;
    std::size_t iterations = 0;
    double condition_number = 0.0;
    std::vector<std::string> warnings;
    std::vector<double> residuals;         // in the loss space, divided by the point errors
    std::vector<double> objective_history; // cost after every accepted step, starting with the guess
    LossSpace loss_space = LossSpace::log;
};

std::array<std::string_view, 3> parameter_names(TemperatureModel model);

struct TempScalingFit {
    double s0 = 0.0;   // V^2/m^2/Hz
    double t0 = 0.0;   // K
    double beta = 0.0;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    double chi2_reduced = 0.0;
    FitReport report;
};

struct ArrheniusFit {
    double s0 = 0.0;  // V^2/m^2/Hz
    double s_t = 0.0; // V^2/m^2/Hz
    double t0 = 0.0;  // K
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();
    FitReport report;
};

/// Raised when the iteration budget runs out; carries the best point found.
class FitNotConverged : public NumericalError {
public:
    FitNotConverged(const std::string& what, FitReport best) : NumericalError(what), best_(std::move(best)) {}
    const FitReport& best() const noexcept { return best_; }

private:
    FitReport best_;
};

class RankDeficientFit : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// S0 (1 + (T/T0)^beta)
double temp_scaling_model(double temperature, double s0, double t0, double beta);
/// S0 + S_T exp(-T0/T)
double arrhenius_model(double temperature, double s0, double s_t, double t0);
double evaluate_model(TemperatureModel model, const Params3& params, double temperature);

/// Starting point for the solver; defined for any nonempty positive dataset.
Params3 initial_guess(const NoiseDataset& data, TemperatureModel model);

/// Damped Gauss-Newton (Levenberg-Marquardt) in log-parameters with an analytic Jacobian.
FitReport fit_model(const NoiseDataset& data, TemperatureModel model, const FitOptions& opts = {});

TempScalingFit fit_temp_scaling(const NoiseDataset& data, const FitOptions& opts = {});
ArrheniusFit fit_arrhenius(const NoiseDataset& data, const FitOptions& opts = {});

} // namespace fieldnoise
