#include "fieldnoise/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <span>

#include "fieldnoise/error.hpp"

namespace fieldnoise {

namespace {

using nlohmann::json;

std::string location(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void field_error(std::string_view source, std::string_view field, const std::string& what)
{
    throw InputError(std::string(source) + ": field '" + std::string(field) + "': " + what);
}

std::optional<double> number(const json& obj, std::string_view key, std::string_view source)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        return std::nullopt;
    if (!it->is_number())
        field_error(source, key, "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v))
        field_error(source, key, "must be finite");
    return v;
}

std::optional<std::uint64_t> unsigned_integer(const json& obj, std::string_view key, std::string_view source)
{
    const auto it = obj.find(key);
    if (it == obj.end())
        return std::nullopt;
    if (!it->is_number_unsigned())
        field_error(source, key, "expected a non-negative integer");
    return it->get<std::uint64_t>();
}

std::vector<double> number_list(const json& obj, std::string_view key, std::string_view source)
{
    const auto& arr = obj.at(key);
    if (!arr.is_array() || arr.empty())
        field_error(source, key, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& v : arr) {
        if (!v.is_number() || !(v.get<double>() > 0))
            field_error(source, key, "entries must be positive numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

void require_object(const json& doc, std::string_view source)
{
    if (!doc.is_object())
        throw InputError(std::string(source) + ": expected a JSON object");
}

template <class Fn>
void check_field(std::string_view source, std::string_view field, bool ok, Fn&& message)
{
    if (!ok)
        field_error(source, field, message());
}

constexpr std::array<std::string_view, 7> ensemble_keys{"beta", "e_min_K", "e_max_K", "tau0_s",
                                                       "n",    "amplitude", "seed"};

void reject_unknown_keys(const json& doc, std::string_view source, std::span<const std::string_view> extra = {})
{
    for (const auto& item : doc.items()) {
        const auto& key = item.key();
        const auto known = [&](std::span<const std::string_view> set) {
            return std::find(set.begin(), set.end(), key) != set.end();
        };
        if (!known(ensemble_keys) && !known(extra))
            field_error(source, key, "unknown key");
    }
}

EnsembleConfig parse_ensemble(const json& doc, std::string_view source);

json matrix_json(const Eigen::Matrix3d& m)
{
    json rows = json::array();
    for (int i = 0; i < 3; ++i)
        rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
    return rows;
}

} // namespace

json parse_json_document(std::string_view text, std::string_view source)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InputError(std::string(source) + ":" + location(text, e.byte == 0 ? 0 : e.byte - 1)
                         + ": malformed JSON (" + e.what() + ")");
    }
}

EnsembleConfig ensemble_config_from_json(const json& doc, std::string_view source)
{
    require_object(doc, source);
    reject_unknown_keys(doc, source);
    return parse_ensemble(doc, source);
}

namespace {

EnsembleConfig parse_ensemble(const json& doc, std::string_view source)
{
    EnsembleConfig cfg;
    if (auto v = number(doc, "beta", source))
        cfg.beta = *v;
    if (auto v = number(doc, "e_min_K", source))
        cfg.e_min = *v;
    if (auto v = number(doc, "e_max_K", source))
        cfg.e_max = *v;
    if (auto v = number(doc, "tau0_s", source))
        cfg.tau0 = *v;
    if (auto v = unsigned_integer(doc, "n", source))
        cfg.n_fluctuators = static_cast<std::size_t>(*v);
    if (auto v = number(doc, "amplitude", source))
        cfg.amplitude = *v;
    if (auto v = unsigned_integer(doc, "seed", source))
        cfg.seed = *v;

    check_field(source, "beta", cfg.beta > 0, [] { return "must be positive"; });
    check_field(source, "e_min_K", cfg.e_min > 0, [] { return "must be positive"; });
    check_field(source, "e_max_K", cfg.e_max > cfg.e_min, [] { return "must exceed e_min_K"; });
    check_field(source, "tau0_s", cfg.tau0 > 0, [] { return "must be positive"; });
    check_field(source, "n", cfg.n_fluctuators >= 1, [] { return "must be at least 1"; });
    check_field(source, "amplitude", cfg.amplitude > 0, [] { return "must be positive"; });
    return cfg;
}

} // namespace

json to_json(const EnsembleConfig& cfg)
{
    return {{"beta", cfg.beta},         {"e_min_K", cfg.e_min}, {"e_max_K", cfg.e_max},
            {"tau0_s", cfg.tau0},       {"n", cfg.n_fluctuators}, {"amplitude", cfg.amplitude},
            {"seed", cfg.seed}};
}

DuttaHornParams dutta_horn_params_from_json(const json& doc, std::string_view source)
{
    require_object(doc, source);
    static constexpr std::array<std::string_view, 2> extra{"t0_K", "s0"};
    reject_unknown_keys(doc, source, extra);
    DuttaHornParams p;
    if (auto v = number(doc, "beta", source))
        p.beta = *v;
    if (auto v = number(doc, "t0_K", source))
        p.t0 = *v;
    if (auto v = number(doc, "s0", source))
        p.s0 = *v;
    if (auto v = number(doc, "tau0_s", source))
        p.tau0 = *v;
    if (auto v = number(doc, "e_min_K", source))
        p.e_min = *v;
    if (auto v = number(doc, "e_max_K", source))
        p.e_max = *v;
    check_field(source, "beta", p.beta > 0, [] { return "must be positive"; });
    check_field(source, "t0_K", p.t0 > 0, [] { return "must be positive"; });
    check_field(source, "s0", p.s0 > 0, [] { return "must be positive"; });
    check_field(source, "tau0_s", p.tau0 > 0, [] { return "must be positive"; });
    check_field(source, "e_max_K", p.e_min > 0 && p.e_max > p.e_min, [] { return "need 0 < e_min_K < e_max_K"; });
    return p;
}

SimulationPlan simulation_plan_from_json(std::string_view text, std::string_view source)
{
    const auto doc = parse_json_document(text, source);
    require_object(doc, source);
    static constexpr std::array<std::string_view, 4> extra{"temperatures_K", "frequencies_Hz", "calibrate", "trace"};
    reject_unknown_keys(doc, source, extra);
    SimulationPlan plan;
    plan.ensemble = parse_ensemble(doc, source);
    if (doc.contains("temperatures_K"))
        plan.temperatures = number_list(doc, "temperatures_K", source);
    if (doc.contains("frequencies_Hz"))
        plan.frequencies = number_list(doc, "frequencies_Hz", source);
    if (doc.contains("calibrate")) {
        const auto& c = doc.at("calibrate");
        if (!c.is_object())
            field_error(source, "calibrate", "expected an object");
        CalibrationPoint point;
        point.temperature = number(c, "temperature_K", source).value_or(0.0);
        point.frequency = number(c, "frequency_Hz", source).value_or(0.0);
        point.s_e = number(c, "SE_V2m2Hz", source).value_or(0.0);
        check_field(source, "calibrate", point.temperature > 0 && point.frequency > 0 && point.s_e > 0,
                    [] { return "temperature_K, frequency_Hz and SE_V2m2Hz must be positive"; });
        plan.calibration = point;
    }
    if (doc.contains("trace")) {
        const auto& t = doc.at("trace");
        if (!t.is_object())
            field_error(source, "trace", "expected an object");
        TraceRequest req;
        req.temperature = number(t, "temperature_K", source).value_or(0.0);
        req.sample_rate = number(t, "sample_rate_Hz", source).value_or(0.0);
        req.duration = number(t, "duration_s", source).value_or(0.0);
        check_field(source, "trace", req.temperature > 0 && req.sample_rate > 0 && req.duration > 0,
                    [] { return "temperature_K, sample_rate_Hz and duration_s must be positive"; });
        plan.trace = req;
    }
    return plan;
}

json fit_report_json(const FitReport& report)
{
    const auto names = parameter_names(report.model);
    json params = json::object();
    json errors = json::object();
    for (std::size_t i = 0; i < 3; ++i) {
        params[std::string(names[i])] = report.params[i];
        errors[std::string(names[i])] = report.errors[i];
    }
    return {{"model", std::string(to_string(report.model))},
            {"params", params},
            {"errors_1sigma", errors},
            {"covariance", matrix_json(report.covariance)},
            {"covariance_method", report.covariance_method},
            {"parameter_order", {names[0], names[1], names[2]}},
            {"loss_space", std::string(to_string(report.loss_space))},
            {"chi2_reduced", report.chi2_reduced},
            {"n_points", report.n_points},
            {"converged", report.converged},
            {"iterations", report.iterations},
            {"condition_number", report.condition_number},
            {"warnings", report.warnings}};
}

json alpha_report_json(const AlphaFit& fit)
{
    return {{"alpha", fit.alpha}, {"alpha_err", fit.alpha_err}, {"prefactor", fit.prefactor},
            {"f_lo", fit.f_lo},   {"f_hi", fit.f_hi},           {"n_points", fit.n_points}};
}

json extrapolation_report_json(const ExtrapolationReport& report, const ComparisonConstants& constants)
{
    json out;
    out["law"] = {{"distance_exponent", report.law.distance_exponent},
                  {"frequency_exponent", report.law.frequency_exponent},
                  {"reference_V2m2", report.law.reference}};
    out["query"] = {{"distance_m", report.query.distance},
                    {"frequency_Hz", report.query.frequency},
                    {"averaging_time_s", report.query.averaging_time},
                    {"tau0_s", report.query.tau0}};
    out["scale_noise_V2m2Hz"] = report.s_e;
    auto optional_number = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    out["sigma_e_Vm"] = optional_number(report.sigma_e);
    out["sigma_v2_a_V2m2"] = optional_number(report.sigma_v2_a);
    out["static_field_ratio"] = optional_number(report.static_field_ratio);
    out["patch_ratio"] = optional_number(report.patch_ratio);
    out["cantilever_SE_V2m2Hz"] = optional_number(report.cantilever_s_e);
    out["cantilever_ratio"] = optional_number(report.cantilever_ratio);
    out["cantilever_within_agreement"]
        = report.cantilever_within_agreement ? json(*report.cantilever_within_agreement) : json(nullptr);
    json refs = json::object();
    for (const auto& [name, c] : constants.entries)
        refs[name] = {{"value", c.value}, {"units", c.units}, {"source", c.source}};
    out["comparison_constants"] = refs;
    out["comparison_constants_version"] = constants.version;
    out["notes"] = report.notes;
    return out;
}

std::string dump_json(const json& doc)
{
    return doc.dump(2) + "\n";
}

} // namespace fieldnoise
