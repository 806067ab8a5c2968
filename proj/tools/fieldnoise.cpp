// fieldnoise: command-line front end for the surface electric-field noise toolkit.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fieldnoise/dataset.hpp"
#include "fieldnoise/dutta_horn.hpp"
#include "fieldnoise/ensemble.hpp"
#include "fieldnoise/error.hpp"
#include "fieldnoise/extrapolation.hpp"
#include "fieldnoise/fitting.hpp"
#include "fieldnoise/json_io.hpp"
#include "fieldnoise/manifest.hpp"
#include "fieldnoise/physics.hpp"
#include "fieldnoise/reference_table.hpp"
#include "fieldnoise/spectral.hpp"
#include "fieldnoise/synthetic.hpp"

namespace fn = fieldnoise;
using nlohmann::json;

namespace {

enum ExitCode { exit_ok = 0, exit_failure = 1, exit_input = 2, exit_numerical = 3 };

struct Globals {
    std::uint64_t seed = 0;
    std::string output;
    std::string format; // empty: command default
    bool quiet = false;
    std::string command_line;
};

std::string fmt_sci(double v, int digits = 4)
{
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

class Runner {
public:
    explicit Runner(Globals& g) : g_(g) {}

    std::string format_or(std::string_view fallback) const { return g_.format.empty() ? std::string(fallback) : g_.format; }

    void note(const std::string& line) const
    {
        if (!g_.quiet)
            std::cerr << line << '\n';
    }

    void warn(const std::string& line) const { std::cerr << "warning: " << line << '\n'; }

    /// Writes the primary result to --output (plus manifest) or stdout.
    void emit(const std::string& text, std::string_view config_bytes, std::uint64_t seed) const
    {
        if (g_.output.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        write_text(g_.output, text);
        fn::write_manifest(g_.output, fn::make_manifest(g_.command_line, config_bytes, seed));
    }

    static void write_text(const std::string& path, const std::string& text)
    {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw fn::InputError("cannot write '" + path + "'");
        out << text;
        if (!out)
            throw fn::InputError("failed writing '" + path + "'");
    }

    const Globals& globals() const { return g_; }

private:
    Globals& g_;
};

// Canonical configuration bytes: the inputs plus the exact command line.
std::string config_bytes(const Globals& g, std::initializer_list<std::string_view> inputs)
{
    std::string bytes = g.command_line;
    for (auto in : inputs) {
        bytes.push_back('\0');
        bytes.append(in);
    }
    return bytes;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config;
    std::string trace_output;
};

int run_simulate(const Runner& run, const SimulateArgs& args, bool seed_given)
{
    const std::string text = fn::read_file(args.config);
    auto plan = fn::simulation_plan_from_json(text, args.config);
    if (seed_given)
        plan.ensemble.seed = run.globals().seed;

    auto ens = fn::sample_ensemble(plan.ensemble);
    if (plan.calibration)
        ens = fn::calibrate_ensemble(ens, plan.calibration->temperature, plan.calibration->frequency,
                                     plan.calibration->s_e);

    fn::NoiseDataset data;
    data.label = "simulated";
    for (double t : plan.temperatures) {
        const auto s = fn::ensemble_spectrum(ens, t, plan.frequencies);
        for (std::size_t i = 0; i < s.size(); ++i)
            data.samples.push_back({t, plan.frequencies[i], s[i], 0.0});
    }

    const auto format = run.format_or("csv");
    std::ostringstream out;
    if (format == "csv") {
        fn::write_noise_csv(out, data);
    } else {
        json rows = json::array();
        for (const auto& s : data.samples)
            rows.push_back({{"temperature_K", s.temperature}, {"frequency_Hz", s.frequency}, {"SE", s.s_e}});
        out << fn::dump_json({{"config", fn::to_json(plan.ensemble)}, {"samples", rows}});
    }
    const auto bytes = config_bytes(run.globals(), {text});
    run.emit(out.str(), bytes, plan.ensemble.seed);

    if (plan.trace) {
        if (args.trace_output.empty())
            throw fn::InputError("config requests a trace; pass --trace-output");
        const auto trace = fn::telegraph_trace(ens, plan.trace->temperature, plan.trace->sample_rate,
                                               plan.trace->duration, plan.ensemble.seed);
        std::ostringstream tr;
        tr << fn::trace_csv_header << '\n';
        for (std::size_t k = 0; k < trace.values.size(); ++k)
            tr << fn::format_double(static_cast<double>(k) / trace.sample_rate) << ','
               << fn::format_double(trace.values[k]) << '\n';
        Runner::write_text(args.trace_output, tr.str());
        fn::write_manifest(args.trace_output, fn::make_manifest(run.globals().command_line, bytes, plan.ensemble.seed));
    }

    run.note("simulated " + std::to_string(ens.size()) + " fluctuators, " + std::to_string(data.samples.size())
             + " spectrum samples");
    for (double f : plan.frequencies) {
        std::vector<double> t, s;
        for (const auto& smp : data.samples)
            if (smp.frequency == f && smp.temperature >= 40 && smp.temperature <= 100) {
                t.push_back(smp.temperature);
                s.push_back(smp.s_e);
            }
        if (t.size() >= 3) {
            const auto line = fn::fit_loglog(t, s);
            run.note("  f = " + fmt_sci(f / 1e6) + " MHz: temperature exponent over 40-100 K = "
                     + fmt_sci(line.slope));
        }
    }
    return exit_ok;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string dataset;
    std::string model = "temp-scaling";
    std::string loss = "log";
    std::size_t max_iterations = 200;
    double tolerance = 1e-10;
    std::size_t bootstrap = 0;
    double rescale_to = 0.0;
    std::vector<double> start;
    std::string resistivity;
};

// Fitted S(T)/S(T_min) beside the Johnson-like rho(T) T expectation.
json johnson_comparison(const fn::FitReport& rep, const fn::NoiseDataset& data, const std::string& path)
{
    const auto curve = fn::read_resistivity_csv(std::filesystem::path(path));
    const auto range = curve.samples();
    std::vector<double> temps;
    for (double t : data.temperatures())
        if (t >= range.front().temperature && t <= range.back().temperature)
            temps.push_back(t);
    std::sort(temps.begin(), temps.end());
    temps.erase(std::unique(temps.begin(), temps.end()), temps.end());
    if (temps.empty())
        throw fn::InputError(path + ": resistivity curve does not cover any data temperature");
    const auto johnson = fn::johnson_prediction(curve, temps);
    const double base = fn::evaluate_model(rep.model, rep.params, temps.front());
    json rows = json::array();
    for (std::size_t i = 0; i < temps.size(); ++i) {
        const double fitted = fn::evaluate_model(rep.model, rep.params, temps[i]) / base;
        const double expected = johnson.samples[i].s_e;
        rows.push_back({{"temperature_K", temps[i]},
                        {"fitted_ratio", fitted},
                        {"johnson_ratio", expected},
                        {"discrepancy", fitted / expected}});
    }
    return rows;
}

std::string fit_text(const fn::FitReport& rep, const std::string& format, const json& johnson)
{
    if (format == "json") {
        auto doc = fn::fit_report_json(rep);
        if (!johnson.is_null())
            doc["johnson_comparison"] = johnson;
        return fn::dump_json(doc);
    }
    std::ostringstream out;
    out << "parameter,value,error_1sigma\n";
    const auto names = fn::parameter_names(rep.model);
    for (std::size_t i = 0; i < 3; ++i)
        out << names[i] << ',' << fn::format_double(rep.params[i]) << ',' << fn::format_double(rep.errors[i]) << '\n';
    return out.str();
}

int run_fit(const Runner& run, const FitArgs& args)
{
    const std::string text = fn::read_file(args.dataset);
    std::istringstream in(text);
    auto data = fn::read_noise_csv(in, args.dataset);
    if (data.samples.empty())
        throw fn::InputError(args.dataset + ": no data rows");
    if (args.rescale_to > 0) {
        for (auto& s : data.samples) {
            s.s_e_err = fn::rescale_frequency(s.s_e_err, s.frequency, args.rescale_to);
            s.s_e = fn::rescale_frequency(s.s_e, s.frequency, args.rescale_to);
            s.frequency = args.rescale_to;
        }
    }

    fn::FitOptions opts;
    opts.loss_space = fn::parse_loss_space(args.loss);
    opts.max_iterations = args.max_iterations;
    opts.tolerance = args.tolerance;
    opts.bootstrap_resamples = args.bootstrap;
    opts.seed = run.globals().seed;
    if (!args.start.empty()) {
        if (args.start.size() != 3)
            throw fn::InputError("--start takes three comma-separated values");
        opts.start = fn::Params3{args.start[0], args.start[1], args.start[2]};
    }
    const auto model = fn::parse_temperature_model(args.model);

    fn::FitReport rep;
    try {
        rep = fn::fit_model(data, model, opts);
    } catch (const fn::FitNotConverged& e) {
        auto best = fn::fit_report_json(e.best());
        best["error"] = e.what();
        std::cerr << fn::dump_json(best);
        throw;
    }
    for (const auto& w : rep.warnings)
        run.warn(w);

    json johnson;
    std::string rho_text;
    if (!args.resistivity.empty()) {
        rho_text = fn::read_file(args.resistivity);
        johnson = johnson_comparison(rep, data, args.resistivity);
    }
    run.emit(fit_text(rep, run.format_or("json"), johnson), config_bytes(run.globals(), {text, rho_text}),
             run.globals().seed);

    const auto names = fn::parameter_names(model);
    run.note(std::string("model ") + std::string(fn::to_string(model)) + ", " + std::to_string(rep.n_points)
             + " points, reduced chi^2 " + fmt_sci(rep.chi2_reduced));
    for (std::size_t i = 0; i < 3; ++i) {
        const bool spectral = names[i] == "s0" || names[i] == "s_t";
        const double scale = spectral ? 1.0 / fn::reference_s0_unit : 1.0;
        run.note("  " + std::string(names[i]) + " = " + fmt_sci(rep.params[i] * scale) + " +/- "
                 + fmt_sci(rep.errors[i] * scale) + (spectral ? " x1e-15 V^2/m^2/Hz" : (names[i] == "t0" ? " K" : "")));
    }
    return exit_ok;
}

// ---------------------------------------------------------------- thermometry

int run_thermometry(const Runner& run, const std::string& path, double trap_frequency)
{
    const std::string text = fn::read_file(path);
    std::istringstream in(text);
    const auto series = fn::read_sideband_csv(in, trap_frequency);
    const auto rate = fn::heating_rate(series);
    std::vector<std::string> warnings;
    for (auto idx : rate.skipped)
        warnings.push_back("row " + std::to_string(idx + 1) + " skipped: P_bsb <= P_rsb (thermometry degenerate)");

    double n_dot = rate.n_dot;
    if (n_dot < 0) {
        warnings.push_back("negative fitted heating rate " + fn::format_double(n_dot) + " clamped to 0");
        n_dot = 0;
    }
    for (const auto& w : warnings)
        run.warn(w);
    const double s_e = fn::field_noise_from_heating(n_dot, trap_frequency);
    const double s_e_err = fn::field_noise_from_heating(rate.n_dot_err, trap_frequency);
    const double s_e_1mhz = fn::rescale_frequency(s_e, trap_frequency, 1e6);

    json report{{"n_dot", rate.n_dot},
                {"n_dot_err", rate.n_dot_err},
                {"n_initial", rate.n_initial},
                {"trap_frequency_Hz", trap_frequency},
                {"SE_V2m2Hz", s_e},
                {"SE_err_V2m2Hz", s_e_err},
                {"SE_1MHz_V2m2Hz", s_e_1mhz},
                {"points_used", series.points.size() - rate.skipped.size()},
                {"skipped_rows", rate.skipped},
                {"warnings", warnings}};

    std::string text_out;
    if (run.format_or("json") == "json") {
        text_out = fn::dump_json(report);
    } else {
        std::ostringstream out;
        out << "quantity,value\n";
        for (const char* key : {"n_dot", "n_dot_err", "n_initial", "trap_frequency_Hz", "SE_V2m2Hz", "SE_err_V2m2Hz",
                                "SE_1MHz_V2m2Hz"})
            out << key << ',' << fn::format_double(report[key].get<double>()) << '\n';
        text_out = out.str();
    }
    run.emit(text_out, config_bytes(run.globals(), {text}), 0);
    run.note("heating rate " + fmt_sci(rate.n_dot) + " +/- " + fmt_sci(rate.n_dot_err) + " quanta/s");
    std::string line = "S_E(" + fmt_sci(trap_frequency / 1e6) + " MHz) = " + fmt_sci(s_e / 1e-15) + " x1e-15 V^2/m^2/Hz";
    if (trap_frequency != 1e6)
        line += "; scaled to 1 MHz " + fmt_sci(s_e_1mhz / 1e-15) + " x1e-15 V^2/m^2/Hz";
    run.note(line);
    return exit_ok;
}

// ---------------------------------------------------------------- predict-alpha

struct AlphaArgs {
    std::string params_file;
    double beta = 3.6;
    double t0 = 46.0;
    double tau0 = 1e-12;
    double s0 = 1.0; // x1e-15 V^2/m^2/Hz
    double frequency = 1e6;
    double t_min = 5.0;
    double t_max = 100.0;
    double t_step = 1.0;
    bool figure = false;
    std::vector<double> figure_temperatures{30, 46, 60, 75, 90, 100};
    double f_min = 0.6e6;
    double f_max = 1.5e6;
    std::size_t f_points = 10;
};

int run_predict_alpha(const Runner& run, AlphaArgs args, const CLI::App& sub)
{
    fn::DuttaHornParams p;
    std::string file_text;
    if (!args.params_file.empty()) {
        file_text = fn::read_file(args.params_file);
        p = fn::dutta_horn_params_from_json(fn::parse_json_document(file_text, args.params_file), args.params_file);
    } else {
        p.s0 = args.s0 * fn::reference_s0_unit;
    }
    if (sub.count("--beta") || args.params_file.empty())
        p.beta = args.beta;
    if (sub.count("--t0") || args.params_file.empty())
        p.t0 = args.t0;
    if (sub.count("--tau0") || args.params_file.empty())
        p.tau0 = args.tau0;
    const double omega = 2.0 * std::numbers::pi * args.frequency;

    std::optional<double> t1;
    if (p.beta > 1)
        t1 = fn::crossover_temperature(p);

    std::ostringstream out;
    const auto format = run.format_or("csv");
    if (!args.figure) {
        if (!(args.t_step > 0) || !(args.t_min > 0) || !(args.t_max >= args.t_min))
            throw fn::InputError("temperature grid needs 0 < t-min <= t-max and t-step > 0");
        std::vector<double> grid;
        const auto steps = static_cast<std::size_t>(std::floor((args.t_max - args.t_min) / args.t_step + 1e-9));
        for (std::size_t i = 0; i <= steps; ++i)
            grid.push_back(args.t_min + static_cast<double>(i) * args.t_step);
        if (t1 && *t1 >= args.t_min && *t1 <= args.t_max)
            grid.push_back(*t1);
        std::sort(grid.begin(), grid.end());

        json rows = json::array();
        if (format == "csv") {
            out << "# beta=" << fn::format_double(p.beta) << " t0_K=" << fn::format_double(p.t0)
                << " tau0_s=" << fn::format_double(p.tau0) << " frequency_Hz=" << fn::format_double(args.frequency)
                << '\n';
            out << "# T1_K=" << (t1 ? fn::format_double(*t1) : std::string("none")) << '\n';
            out << "temperature_K,alpha\n";
        }
        for (double t : grid) {
            const double a = fn::model_alpha(p, omega, t);
            if (format == "csv")
                out << fn::format_double(t) << ',' << fn::format_double(a) << '\n';
            else
                rows.push_back({{"temperature_K", t}, {"alpha", a}});
        }
        if (format != "csv")
            out << fn::dump_json({{"T1_K", t1 ? json(*t1) : json(nullptr)},
                                  {"beta", p.beta},
                                  {"t0_K", p.t0},
                                  {"tau0_s", p.tau0},
                                  {"frequency_Hz", args.frequency},
                                  {"rows", rows}});
    } else {
        // S x f against f, the presentation in which a 1/f spectrum is flat.
        const fn::DuttaHornModel model(p);
        const auto freqs = fn::synthetic::log_grid(args.f_min, args.f_max, args.f_points);
        json rows = json::array();
        if (format == "csv") {
            out << "# T1_K=" << (t1 ? fn::format_double(*t1) : std::string("none")) << '\n';
            out << "temperature_K,frequency_Hz,S_times_f,alpha_model\n";
        }
        for (double t : args.figure_temperatures) {
            const double a = fn::model_alpha(p, omega, t);
            for (double f : freqs) {
                const double sf = model.spectrum(2.0 * std::numbers::pi * f, t) * f;
                if (format == "csv")
                    out << fn::format_double(t) << ',' << fn::format_double(f) << ',' << fn::format_double(sf) << ','
                        << fn::format_double(a) << '\n';
                else
                    rows.push_back({{"temperature_K", t}, {"frequency_Hz", f}, {"S_times_f", sf}, {"alpha_model", a}});
            }
        }
        if (format != "csv")
            out << fn::dump_json({{"T1_K", t1 ? json(*t1) : json(nullptr)}, {"rows", rows}});
    }
    run.emit(out.str(), config_bytes(run.globals(), {file_text}), 0);
    if (t1)
        run.note("crossover temperature T1 = " + fmt_sci(*t1) + " K");
    return exit_ok;
}

// ---------------------------------------------------------------- psd / fit-alpha

int run_psd(const Runner& run, const std::string& path, std::size_t segment, const std::string& window)
{
    const std::string text = fn::read_file(path);
    std::istringstream in(text);
    const auto rows = fn::read_numeric_csv(in, fn::trace_csv_header, path);
    if (rows.size() < 2)
        throw fn::InputError(path + ": trace needs at least two samples");
    const double dt = rows[1][0] - rows[0][0];
    if (!(dt > 0))
        throw fn::InputError(path + ": time column must be increasing");
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& r : rows)
        values.push_back(r[1]);

    const auto est = fn::estimate_psd(values, 1.0 / dt, segment, fn::parse_window(window));
    std::ostringstream out;
    if (run.format_or("csv") == "csv") {
        out << fn::psd_csv_header << '\n';
        for (std::size_t k = 0; k < est.psd.size(); ++k)
            out << fn::format_double(est.frequencies[k]) << ',' << fn::format_double(est.psd[k]) << '\n';
    } else {
        out << fn::dump_json({{"frequency_Hz", est.frequencies},
                              {"psd", est.psd},
                              {"segments", est.segments},
                              {"window", std::string(fn::to_string(est.window))}});
    }
    run.emit(out.str(), config_bytes(run.globals(), {text}), 0);
    run.note("averaged " + std::to_string(est.segments) + " segments, resolution " + fmt_sci(est.resolution) + " Hz");
    return exit_ok;
}

int run_fit_alpha(const Runner& run, const std::string& path, double f_lo, double f_hi,
                  std::optional<double> temperature)
{
    const std::string text = fn::read_file(path);
    const auto first_line = [&] {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty() && line[0] != '#')
                return line;
        return std::string();
    }();
    std::istringstream in(text);
    fn::AlphaFit fit;
    if (first_line.starts_with(fn::psd_csv_header)) {
        std::vector<double> f, s;
        for (const auto& r : fn::read_numeric_csv(in, fn::psd_csv_header, path)) {
            f.push_back(r[0]);
            s.push_back(r[1]);
        }
        fit = fn::fit_alpha(f, s, f_lo, f_hi);
    } else {
        auto data = fn::read_noise_csv(in, path);
        std::vector<double> temps = data.temperatures();
        std::sort(temps.begin(), temps.end());
        temps.erase(std::unique(temps.begin(), temps.end()), temps.end());
        if (!temperature && temps.size() > 1)
            throw fn::InputError(path + " holds several temperatures; select one with --temperature");
        const double t_sel = temperature.value_or(temps.empty() ? 0.0 : temps.front());
        fn::NoiseDataset subset;
        for (const auto& s : data.samples)
            if (s.temperature == t_sel)
                subset.samples.push_back(s);
        fit = fn::fit_alpha(subset, f_lo, f_hi);
    }
    const auto report = fn::alpha_report_json(fit);
    std::string text_out;
    if (run.format_or("json") == "json") {
        text_out = fn::dump_json(report);
    } else {
        std::ostringstream out;
        out << "alpha,alpha_err,prefactor,f_lo,f_hi,n_points\n"
            << fn::format_double(fit.alpha) << ',' << fn::format_double(fit.alpha_err) << ','
            << fn::format_double(fit.prefactor) << ',' << fn::format_double(fit.f_lo) << ','
            << fn::format_double(fit.f_hi) << ',' << fit.n_points << '\n';
        text_out = out.str();
    }
    run.emit(text_out, config_bytes(run.globals(), {text}), 0);
    run.note("alpha = " + fmt_sci(fit.alpha) + " +/- " + fmt_sci(fit.alpha_err) + " over " + fmt_sci(f_lo) + "-"
             + fmt_sci(f_hi) + " Hz");
    return exit_ok;
}

// ---------------------------------------------------------------- extrapolate

struct ExtrapolateArgs {
    double distance = 100e-9;
    double frequency = 1e4;
    double tau = 1.0;
    double tau0 = 1e-12;
    double distance_exponent = 4.0;
    double frequency_exponent = 1.0;
    double reference = 1e-21;
    double gamma = 0, capacitance = 0, voltage = 0, temperature = 300;
};

int run_extrapolate(const Runner& run, const ExtrapolateArgs& a, bool cantilever)
{
    fn::ScalingLaw law{a.distance_exponent, a.frequency_exponent, a.reference};
    fn::ExtrapolationQuery q{a.distance, a.frequency, a.tau, a.tau0, std::nullopt};
    if (cantilever)
        q.cantilever = fn::CantileverConfig{a.gamma, a.capacitance, a.voltage, a.temperature};
    const auto& constants = fn::builtin_comparison_constants();
    const auto rep = fn::extrapolate(law, q, constants);
    const auto report = fn::extrapolation_report_json(rep, constants);

    std::ostringstream table;
    table << "quantity                         value          comparison\n";
    auto row = [&](const std::string& name, double v, const std::string& cmp) {
        table << std::left << std::setw(33) << name << std::setw(15) << fmt_sci(v, 3) << cmp << '\n';
    };
    row("S_E [V^2/m^2/Hz]", rep.s_e, "");
    if (rep.sigma_e) {
        const double static_here = constants.at("static_field_sigma_e_1um").value * std::pow(1e-6 / a.distance, 2);
        row("sigma_E [V/m]", *rep.sigma_e, "static patch field " + fmt_sci(static_here, 3) + " V/m (ratio "
                                                + fmt_sci(*rep.static_field_ratio, 3) + ")");
        row("sigma_V^2 A_patch [V^2 m^2]", *rep.sigma_v2_a,
            "contact potential " + fmt_sci(constants.at("contact_potential_sigma_v2_a").value, 3) + " V^2 m^2 (ratio "
                + fmt_sci(*rep.patch_ratio, 3) + ")");
    }
    if (rep.cantilever_s_e)
        row("cantilever S_E [V^2/m^2/Hz]", *rep.cantilever_s_e, "ratio to trap extrapolation "
                                                                    + fmt_sci(*rep.cantilever_ratio, 3));
    for (const auto& n : rep.notes)
        table << "note: " << n << '\n';

    const auto format = run.format_or("json");
    run.emit(format == "json" ? fn::dump_json(report) : table.str(), config_bytes(run.globals(), {}), 0);
    if (format == "json")
        run.note(table.str());
    return exit_ok;
}

// ---------------------------------------------------------------- reference-table

int run_reference_table(const Runner& run)
{
    std::ostringstream out;
    if (run.format_or("csv") == "csv") {
        out << "label,s0_1e-15_V2m2Hz,s0_err,t0_K,t0_err,beta,beta_err,note\n";
        for (const auto& r : fn::load_reference_table())
            out << r.label << ',' << fn::format_double(r.s0) << ',' << fn::format_double(r.s0_err) << ','
                << fn::format_double(r.t0) << ',' << fn::format_double(r.t0_err) << ',' << fn::format_double(r.beta)
                << ',' << fn::format_double(r.beta_err) << ",\"" << r.note << "\"\n";
    } else {
        json rows = json::array();
        for (const auto& r : fn::load_reference_table())
            rows.push_back({{"label", r.label},
                            {"s0_1e-15_V2m2Hz", r.s0},
                            {"s0_err", r.s0_err},
                            {"t0_K", r.t0},
                            {"t0_err", r.t0_err},
                            {"beta", r.beta},
                            {"beta_err", r.beta_err},
                            {"note", r.note}});
        out << fn::dump_json(rows);
    }
    run.emit(out.str(), config_bytes(run.globals(), {}), 0);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Surface electric-field noise toolkit: thermometry, activated-fluctuator models, fits and "
                 "extrapolations"};
    app.set_version_flag("--version", std::string(fn::tool_version()));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed (overrides the config seed where one exists)");
    app.add_option("--output,-o", g.output, "Write the result here (plus <output>.manifest.json) instead of stdout");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--quiet,-q", g.quiet, "Suppress the human-readable summary on stderr");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Sample an activated-fluctuator ensemble and emit its spectra");
    simulate->add_option("config", sim.config, "Ensemble config JSON")->required();
    simulate->add_option("--trace-output", sim.trace_output, "Where to write a requested telegraph trace CSV");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit S_E(T) to the temperature-scaling or Arrhenius form");
    fit_cmd->add_option("dataset", fit.dataset, "NoiseDataset CSV")->required();
    fit_cmd->add_option("--model", fit.model, "temp-scaling or arrhenius")
        ->check(CLI::IsMember({"temp-scaling", "power", "arrhenius"}));
    fit_cmd->add_option("--loss", fit.loss, "Residual space")->check(CLI::IsMember({"log", "linear"}));
    fit_cmd->add_option("--max-iterations", fit.max_iterations);
    fit_cmd->add_option("--tolerance", fit.tolerance, "Relative step tolerance");
    fit_cmd->add_option("--bootstrap", fit.bootstrap, "Residual-bootstrap resamples for the covariance");
    fit_cmd->add_option("--rescale-to", fit.rescale_to, "Rescale every point to this frequency (Hz) assuming 1/f");
    fit_cmd->add_option("--resistivity", fit.resistivity, "Resistivity CSV for a Johnson-scaling comparison");
    fit_cmd->add_option("--start", fit.start, "Starting parameters (three values, SI)")->delimiter(',');

    std::string sideband_path;
    double trap_frequency = 0;
    auto* thermo = app.add_subcommand("thermometry", "Heating rate and field noise from sideband data");
    thermo->add_option("sidebands", sideband_path, "Sideband CSV")->required();
    thermo->add_option("--trap-frequency", trap_frequency, "Trap frequency in Hz")->required();

    AlphaArgs alpha;
    auto* predict = app.add_subcommand("predict-alpha", "Frequency exponent alpha(T) and crossover temperature");
    predict->add_option("--params", alpha.params_file, "Parameter JSON (ensemble schema plus t0_K, s0)");
    predict->add_option("--beta", alpha.beta, "Temperature-scaling exponent")->capture_default_str();
    predict->add_option("--t0", alpha.t0, "T0 in K");
    predict->add_option("--tau0", alpha.tau0, "Attempt time in s");
    predict->add_option("--s0", alpha.s0, "S0 in 1e-15 V^2/m^2/Hz (figure mode)");
    predict->add_option("--frequency", alpha.frequency, "Hz");
    predict->add_option("--t-min", alpha.t_min, "Grid start in K")->capture_default_str();
    predict->add_option("--t-max", alpha.t_max, "Grid end in K")->capture_default_str();
    predict->add_option("--t-step", alpha.t_step, "Grid step in K")->capture_default_str();
    predict->add_flag("--figure", alpha.figure, "Emit S x f against f per temperature");
    predict->add_option("--temperatures", alpha.figure_temperatures, "Figure-mode temperatures")->delimiter(',');
    predict->add_option("--f-min", alpha.f_min, "Figure-mode lowest frequency in Hz")->capture_default_str();
    predict->add_option("--f-max", alpha.f_max, "Figure-mode highest frequency in Hz")->capture_default_str();
    predict->add_option("--f-points", alpha.f_points, "Figure-mode log-spaced frequency count")->capture_default_str();

    std::string trace_path;
    std::size_t segment = 4096;
    std::string window = "hann";
    auto* psd = app.add_subcommand("psd", "Welch power spectral density of a trace CSV");
    psd->add_option("trace", trace_path, "Trace CSV (time_s,value)")->required();
    psd->add_option("--segment", segment, "Segment length (power of two)");
    psd->add_option("--window", window)->check(CLI::IsMember({"hann", "rectangular"}));

    std::string spectrum_path;
    double f_lo = 0, f_hi = 0;
    double alpha_temperature = 0;
    auto* fit_alpha = app.add_subcommand("fit-alpha", "Fit S ~ f^-alpha over a frequency band");
    fit_alpha->add_option("spectrum", spectrum_path, "PSD CSV or NoiseDataset CSV")->required();
    fit_alpha->add_option("--f-lo", f_lo)->required();
    fit_alpha->add_option("--f-hi", f_hi)->required();
    fit_alpha->add_option("--temperature", alpha_temperature, "Select one temperature of a NoiseDataset");

    ExtrapolateArgs ex;
    auto* extrap = app.add_subcommand("extrapolate", "Compare the scaled noise with other systems");
    extrap->add_option("--distance", ex.distance, "m");
    extrap->add_option("--frequency", ex.frequency, "Hz");
    extrap->add_option("--tau", ex.tau, "Averaging time for the DC extrapolation, s");
    extrap->add_option("--tau0", ex.tau0, "Shortest timescale, s");
    extrap->add_option("--distance-exponent", ex.distance_exponent);
    extrap->add_option("--frequency-exponent", ex.frequency_exponent);
    extrap->add_option("--reference", ex.reference, "S_E f d^4 in V^2 m^2");
    extrap->add_option("--gamma", ex.gamma, "Cantilever damping, kg/s");
    extrap->add_option("--capacitance", ex.capacitance, "Tip-surface capacitance, F");
    extrap->add_option("--voltage", ex.voltage, "Tip-surface voltage, V");
    extrap->add_option("--cantilever-temperature", ex.temperature, "K");

    auto* table = app.add_subcommand("reference-table", "Print the published temperature-scaling fit parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    for (int i = 0; i < argc; ++i) {
        if (i > 0)
            g.command_line.push_back(' ');
        g.command_line += argv[i];
    }
    Runner run(g);

    try {
        if (*simulate)
            return run_simulate(run, sim, app.count("--seed") > 0);
        if (*fit_cmd)
            return run_fit(run, fit);
        if (*thermo)
            return run_thermometry(run, sideband_path, trap_frequency);
        if (*predict)
            return run_predict_alpha(run, alpha, *predict);
        if (*psd)
            return run_psd(run, trace_path, segment, window);
        if (*fit_alpha)
            return run_fit_alpha(run, spectrum_path, f_lo, f_hi,
                                 fit_alpha->count("--temperature") ? std::optional<double>(alpha_temperature)
                                                                   : std::nullopt);
        if (*extrap) {
            const bool cantilever = extrap->count("--gamma") || extrap->count("--capacitance") || extrap->count("--voltage");
            return run_extrapolate(run, ex, cantilever);
        }
        if (*table)
            return run_reference_table(run);
    } catch (const fn::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const fn::ResourceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    } catch (const fn::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_failure;
}
