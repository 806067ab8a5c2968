#include "fieldnoise/fitting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "fieldnoise/rng.hpp"

namespace fieldnoise {

namespace {

struct Problem {
    TemperatureModel model;
    LossSpace loss;
    std::vector<double> t;
    std::vector<double> y;     // observations
    std::vector<double> sigma; // per-point error in the loss space
};

using Vec = Eigen::VectorXd;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, 3>;

Params3 to_params(const Eigen::Vector3d& theta)
{
    return {std::exp(theta[0]), std::exp(theta[1]), std::exp(theta[2])};
}

// Model value and its derivatives with respect to the log-parameters.
double model_and_gradient(TemperatureModel model, const Params3& p, double t, Eigen::Vector3d* grad)
{
    if (model == TemperatureModel::temp_scaling) {
        const double ratio = std::log(t / p[1]);
        const double x = std::exp(p[2] * ratio);
        const double m = p[0] * (1.0 + x);
        if (grad) {
            (*grad)[0] = m;
            (*grad)[1] = -p[0] * x * p[2];
            (*grad)[2] = p[0] * x * ratio * p[2];
        }
        return m;
    }
    const double e = std::exp(-p[2] / t);
    const double m = p[0] + p[1] * e;
    if (grad) {
        (*grad)[0] = p[0];
        (*grad)[1] = p[1] * e;
        (*grad)[2] = -p[1] * e * p[2] / t;
    }
    return m;
}

bool residuals(const Problem& pr, const Eigen::Vector3d& theta, Vec& r, Mat* jac)
{
    const auto p = to_params(theta);
    if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v) && v > 0; }))
        return false;
    const auto n = static_cast<Eigen::Index>(pr.t.size());
    r.resize(n);
    if (jac)
        jac->resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Vector3d g;
        const double m = model_and_gradient(pr.model, p, pr.t[i], jac ? &g : nullptr);
        if (!(m > 0) || !std::isfinite(m))
            return false;
        if (pr.loss == LossSpace::log) {
            r[i] = (std::log(pr.y[i]) - std::log(m)) / pr.sigma[i];
            if (jac)
                jac->row(i) = -g.transpose() / (m * pr.sigma[i]);
        } else {
            r[i] = (pr.y[i] - m) / pr.sigma[i];
            if (jac)
                jac->row(i) = -g.transpose() / pr.sigma[i];
        }
    }
    return r.allFinite() && (!jac || jac->allFinite());
}

struct SolveResult {
    Eigen::Vector3d theta;
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> history;
};

// Undamped Gauss-Newton steps from a converged point while the steps keep
// contracting. Near the minimum the cost is flat to rounding, so the step
// length (not the cost) decides; the result then no longer depends on where
// the damped iteration crossed the tolerance.
void polish(const Problem& pr, Eigen::Vector3d& theta, Vec& r, Mat& jac, double& cost, SolveResult& out)
{
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10; ++k) {
        const Eigen::Vector3d step = (jac.transpose() * jac).ldlt().solve(-(jac.transpose() * r));
        const double size = step.cwiseAbs().maxCoeff();
        if (!step.allFinite() || !(size < 0.5 * last))
            return;
        Vec r_new;
        Mat jac_new;
        const Eigen::Vector3d trial = theta + step;
        if (!residuals(pr, trial, r_new, &jac_new))
            return;
        const double new_cost = 0.5 * r_new.squaredNorm();
        theta = trial;
        r = std::move(r_new);
        jac = std::move(jac_new);
        if (new_cost < cost) {
            cost = new_cost;
            out.history.push_back(cost);
        }
        last = size;
        if (size <= 1e-15 * (1.0 + theta.cwiseAbs().maxCoeff()))
            return;
    }
}

SolveResult levenberg_marquardt(const Problem& pr, Eigen::Vector3d theta, const FitOptions& opts)
{
    SolveResult out;
    Vec r;
    Mat jac;
    if (!residuals(pr, theta, r, &jac))
        throw NumericalError("model is not finite at the starting point");
    double cost = 0.5 * r.squaredNorm();
    out.history.push_back(cost);
    double lambda = 1e-3;

    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        out.iterations = it + 1;
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d grad = jac.transpose() * r;
        Eigen::Vector3d scale = jtj.diagonal().cwiseMax(1e-12 * std::max(jtj.diagonal().maxCoeff(), 1e-300));

        bool accepted = false;
        Eigen::Vector3d step = Eigen::Vector3d::Zero();
        while (lambda < 1e16) {
            Eigen::Matrix3d a = jtj;
            a.diagonal() += lambda * scale;
            step = a.ldlt().solve(-grad);
            if (!step.allFinite()) {
                lambda *= 10;
                continue;
            }
            Vec r_new;
            Mat jac_new;
            const Eigen::Vector3d trial = theta + step;
            if (residuals(pr, trial, r_new, &jac_new)) {
                const double new_cost = 0.5 * r_new.squaredNorm();
                if (new_cost <= cost) {
                    theta = trial;
                    r = std::move(r_new);
                    jac = std::move(jac_new);
                    cost = new_cost;
                    out.history.push_back(cost);
                    lambda = std::max(lambda / 10, 1e-12);
                    accepted = true;
                    const bool small_step
                        = (step.array().abs() <= opts.tolerance * (1.0 + theta.array().abs())).all();
                    if (small_step) {
                        polish(pr, theta, r, jac, cost, out);
                        out.converged = true;
                        out.theta = theta;
                        return out;
                    }
                    break;
                }
            }
            lambda *= 10;
        }
        if (!accepted) {
            // No downhill direction at any damping: a (numerical) minimum.
            out.converged = true;
            break;
        }
    }
    out.theta = theta;
    return out;
}

Problem make_problem(const NoiseDataset& data, TemperatureModel model, LossSpace loss)
{
    Problem pr{model, loss, {}, {}, {}};
    const bool weighted = data.has_errors();
    for (const auto& s : data.samples) {
        pr.t.push_back(s.temperature);
        pr.y.push_back(s.s_e);
        if (!weighted)
            pr.sigma.push_back(1.0);
        else
            pr.sigma.push_back(loss == LossSpace::log ? s.s_e_err / s.s_e : s.s_e_err);
    }
    return pr;
}

void check_preconditions(const NoiseDataset& data, const FitOptions& opts)
{
    opts.validate();
    data.validate();
    if (data.samples.size() < 5)
        throw InputError("fit needs at least 5 points, got " + std::to_string(data.samples.size()));
    const auto t = data.temperatures();
    const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
    if (!(*tmax >= 3.0 * *tmin))
        throw InputError("fit needs temperatures spanning at least a factor of 3");
    if (opts.loss_space == LossSpace::log) {
        for (const auto& s : data.samples)
            if (!(s.s_e > 0))
                throw InputError("log-space fit needs strictly positive S_E");
    }
    const auto v = data.values();
    const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
    if (*vmax - *vmin <= 1e-12 * std::abs(*vmax))
        throw RankDeficientFit("rank-deficient fit: data are constant in temperature, so the temperature parameters are not identifiable");
}

FitReport summarise(const Problem& pr, const SolveResult& sol, const FitOptions& opts)
{
    FitReport rep;
    rep.model = pr.model;
    rep.loss_space = pr.loss;
    rep.params = to_params(sol.theta);
    rep.n_points = pr.t.size();
    rep.converged = sol.converged;
    rep.iterations = sol.iterations;
    rep.objective_history = sol.history;

    Vec r;
    Mat jac;
    if (!residuals(pr, sol.theta, r, &jac))
        throw NumericalError("model is not finite at the solution");
    rep.residuals.assign(r.data(), r.data() + r.size());

    const double dof = static_cast<double>(pr.t.size()) - 3.0;
    rep.chi2_reduced = r.squaredNorm() / dof;

    Eigen::JacobiSVD<Mat> svd(jac);
    const auto& sv = svd.singularValues();
    rep.condition_number = sv[2] > 0 ? sv[0] / sv[2] : std::numeric_limits<double>::infinity();
    if (!(rep.condition_number < rank_deficiency_threshold)) {
        std::ostringstream msg;
        msg << "Jacobian is rank deficient at the solution (condition number " << rep.condition_number << ")";
        throw RankDeficientFit(msg.str());
    }
    if (rep.condition_number > condition_warning_threshold) {
        std::ostringstream msg;
        msg << "condition number " << rep.condition_number
            << " exceeds 1e6: parameters are weakly identified (does the data reach T0?)";
        rep.warnings.push_back(msg.str());
    }

    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Matrix3d cov_theta = rep.chi2_reduced * jtj.inverse();
    const Eigen::Vector3d p(rep.params[0], rep.params[1], rep.params[2]);
    rep.jacobian_covariance = p.asDiagonal() * cov_theta * p.asDiagonal();
    rep.jacobian_covariance = 0.5 * (rep.jacobian_covariance + rep.jacobian_covariance.transpose()).eval();
    rep.covariance = rep.jacobian_covariance;
    (void)opts;
    return rep;
}

Eigen::Matrix3d bootstrap_covariance(const Problem& pr, const FitReport& rep, const FitOptions& opts,
                                     std::vector<std::string>& warnings)
{
    const std::size_t n = pr.t.size();
    const std::size_t resamples = opts.bootstrap_resamples;
    std::vector<std::optional<Eigen::Vector3d>> results(resamples);
    const Eigen::Vector3d theta_hat(std::log(rep.params[0]), std::log(rep.params[1]), std::log(rep.params[2]));

    FitOptions inner = opts;
    inner.bootstrap_resamples = 0;

    auto run = [&](std::size_t b) {
        Rng rng(opts.seed, b);
        Problem boot = pr;
        for (std::size_t i = 0; i < n; ++i) {
            const double m = evaluate_model(pr.model, rep.params, pr.t[i]);
            const double e = rep.residuals[static_cast<std::size_t>(rng.uniform() * static_cast<double>(n))] * pr.sigma[i];
            boot.y[i] = pr.loss == LossSpace::log ? m * std::exp(e) : m + e;
        }
        if (pr.loss == LossSpace::linear
            && !std::all_of(boot.y.begin(), boot.y.end(), [](double v) { return std::isfinite(v); }))
            return;
        try {
            const auto sol = levenberg_marquardt(boot, theta_hat, inner);
            if (sol.converged)
                results[b] = sol.theta;
        } catch (const NumericalError&) {
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w) {
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t b = w; b < resamples; b += workers)
                run(b);
        }));
    }
    for (auto& t : tasks)
        t.get();

    std::vector<Eigen::Vector3d> ok;
    for (const auto& r : results)
        if (r)
            ok.push_back(r->array().exp().matrix());
    if (ok.size() < 2)
        throw NumericalError("bootstrap produced fewer than two converged resamples");
    if (ok.size() < resamples) {
        warnings.push_back(std::to_string(resamples - ok.size()) + " of " + std::to_string(resamples)
                           + " bootstrap resamples failed to converge and were dropped");
    }
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& v : ok)
        mean += v;
    mean /= static_cast<double>(ok.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& v : ok)
        cov += (v - mean) * (v - mean).transpose();
    return cov / static_cast<double>(ok.size() - 1);
}

} // namespace

LossSpace parse_loss_space(std::string_view name)
{
    if (name == "log")
        return LossSpace::log;
    if (name == "linear")
        return LossSpace::linear;
    throw InputError("unknown loss space '" + std::string(name) + "' (expected log or linear)");
}

TemperatureModel parse_temperature_model(std::string_view name)
{
    if (name == "temp-scaling" || name == "power")
        return TemperatureModel::temp_scaling;
    if (name == "arrhenius")
        return TemperatureModel::arrhenius;
    throw InputError("unknown model '" + std::string(name) + "' (expected temp-scaling or arrhenius)");
}

std::string_view to_string(TemperatureModel model)
{
    return model == TemperatureModel::temp_scaling ? "temp-scaling" : "arrhenius";
}

std::string_view to_string(LossSpace loss)
{
    return loss == LossSpace::log ? "log" : "linear";
}

std::array<std::string_view, 3> parameter_names(TemperatureModel model)
{
    if (model == TemperatureModel::temp_scaling)
        return {"s0", "t0", "beta"};
    return {"s0", "s_t", "t0"};
}

void FitOptions::validate() const
{
    if (!(tolerance > 0))
        throw InputError("fit tolerance must be positive");
    if (max_iterations < 1)
        throw InputError("max_iterations must be at least 1");
    if (start && !std::all_of(start->begin(), start->end(), [](double v) { return v > 0 && std::isfinite(v); }))
        throw InputError("starting parameters must be positive");
}

double temp_scaling_model(double temperature, double s0, double t0, double beta)
{
    return s0 * (1.0 + std::pow(temperature / t0, beta));
}

double arrhenius_model(double temperature, double s0, double s_t, double t0)
{
    return s0 + s_t * std::exp(-t0 / temperature);
}

double evaluate_model(TemperatureModel model, const Params3& params, double temperature)
{
    return model == TemperatureModel::temp_scaling ? temp_scaling_model(temperature, params[0], params[1], params[2])
                                                   : arrhenius_model(temperature, params[0], params[1], params[2]);
}

Params3 initial_guess(const NoiseDataset& data, TemperatureModel model)
{
    if (data.samples.empty())
        throw InputError("initial guess needs at least one sample");
    auto samples = data.samples;
    std::sort(samples.begin(), samples.end(), [](const NoiseSample& a, const NoiseSample& b) {
        return a.temperature != b.temperature ? a.temperature < b.temperature : a.s_e < b.s_e;
    });
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                              [](const NoiseSample& a, const NoiseSample& b) { return a.s_e < b.s_e; });
    const double s_min = lo->s_e;
    const double s_max = hi->s_e;

    if (model == TemperatureModel::arrhenius) {
        const double s_t = s_max > s_min ? s_max - s_min : s_min;
        return {s_min, s_t, 40.0};
    }

    const double target = 2.0 * s_min;
    double t0 = samples[samples.size() / 2].temperature;
    if (samples.size() % 2 == 0)
        t0 = 0.5 * (samples[samples.size() / 2 - 1].temperature + samples[samples.size() / 2].temperature);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const auto& a = samples[i - 1];
        const auto& b = samples[i];
        if (a.s_e < target && b.s_e >= target) {
            t0 = a.temperature + (target - a.s_e) / (b.s_e - a.s_e) * (b.temperature - a.temperature);
            break;
        }
    }
    return {s_min, t0, 3.0};
}

FitReport fit_model(const NoiseDataset& data, TemperatureModel model, const FitOptions& opts)
{
    check_preconditions(data, opts);
    const auto pr = make_problem(data, model, opts.loss_space);
    const Params3 start = opts.start ? *opts.start : initial_guess(data, model);
    if (!std::all_of(start.begin(), start.end(), [](double v) { return v > 0; }))
        throw NumericalError("initial guess is not strictly positive");
    const Eigen::Vector3d theta0(std::log(start[0]), std::log(start[1]), std::log(start[2]));

    const auto sol = levenberg_marquardt(pr, theta0, opts);
    if (!sol.converged) {
        FitReport best;
        best.model = model;
        best.loss_space = opts.loss_space;
        best.params = to_params(sol.theta);
        best.n_points = pr.t.size();
        best.iterations = sol.iterations;
        best.objective_history = sol.history;
        throw FitNotConverged("fit did not converge within " + std::to_string(opts.max_iterations) + " iterations",
                              std::move(best));
    }
    auto rep = summarise(pr, sol, opts);
    if (opts.bootstrap_resamples > 0) {
        rep.covariance = bootstrap_covariance(pr, rep, opts, rep.warnings);
        rep.covariance_method = "bootstrap-residuals";
    }
    for (int i = 0; i < 3; ++i)
        rep.errors[static_cast<std::size_t>(i)] = std::sqrt(std::max(rep.covariance(i, i), 0.0));
    return rep;
}

TempScalingFit fit_temp_scaling(const NoiseDataset& data, const FitOptions& opts)
{
    auto rep = fit_model(data, TemperatureModel::temp_scaling, opts);
    TempScalingFit fit;
    fit.s0 = rep.params[0];
    fit.t0 = rep.params[1];
    fit.beta = rep.params[2];
    fit.covariance = rep.covariance;
    fit.chi2_reduced = rep.chi2_reduced;
    fit.report = std::move(rep);
    return fit;
}

ArrheniusFit fit_arrhenius(const NoiseDataset& data, const FitOptions& opts)
{
    auto rep = fit_model(data, TemperatureModel::arrhenius, opts);
    ArrheniusFit fit;
    fit.s0 = rep.params[0];
    fit.s_t = rep.params[1];
    fit.t0 = rep.params[2];
    fit.covariance = rep.covariance;
    fit.report = std::move(rep);
    return fit;
}

} // namespace fieldnoise
