#include "modal/simulate.hpp"

#include "modal/direct.hpp"
#include "modal/error.hpp"
#include "modal/gmm.hpp"
#include "modal/indirect.hpp"
#include "modal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <tuple>

namespace modal {

RateEstimator EstimatorSpec::parse(const std::string& name)
{
    if (name == "kernel")
        return RateEstimator::kernel;
    if (name == "sample-point")
        return RateEstimator::sample_point;
    if (name == "hsm" || name == "half-sample")
        return RateEstimator::half_sample;
    throw InvalidArgument("unknown estimator '" + name + "' (kernel, sample-point, hsm)");
}

ModeTruth mixture_mode_truth(const MixtureSpec& spec)
{
    spec.validate();
    if (spec.dim() != 1)
        throw InvalidArgument("mode truth needs a univariate distribution");
    const GaussianMixtureModel model(spec);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double min_sd = lo;
    for (std::size_t l = 0; l < spec.components(); ++l) {
        const double mu = spec.means[l](0);
        const double sd = std::sqrt(spec.covariances[l](0, 0));
        lo = std::min(lo, mu - 6.0 * sd);
        hi = std::max(hi, mu + 6.0 * sd);
        min_sd = std::min(min_sd, sd);
    }
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / (min_sd / 50.0)));
    const double dx = (hi - lo) / static_cast<double>(steps);
    double best = lo;
    double best_f = -1.0;
    for (std::size_t i = 0; i <= steps; ++i) {
        const double x = lo + dx * static_cast<double>(i);
        const double f = model.derivatives_1d(x)[0];
        if (f > best_f) {
            best_f = f;
            best = x;
        }
    }
    // Newton on f' from the grid argmax, kept inside the bracketing cell.
    double x = best;
    for (int iter = 0; iter < 100; ++iter) {
        const auto d = model.derivatives_1d(x);
        if (!(d[2] < 0.0))
            break;
        const double next = std::clamp(x - d[1] / d[2], best - dx, best + dx);
        const bool done = std::abs(next - x) <= 1e-14 * std::max(1.0, std::abs(x));
        x = next;
        if (done)
            break;
    }
    const auto d = model.derivatives_1d(x);
    return {x, d[0], d[2], d[3]};
}

std::pair<double, double> ols_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidArgument("least squares needs at least two paired points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw InvalidArgument("least squares needs distinct x values");
    const double slope = sxy / sxx;
    if (x.size() == 2)
        return {slope, 0.0};
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - my - slope * (x[i] - mx);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / (n - 2.0) / sxx)};
}

namespace {

double bandwidth_for(const EstimatorSpec& est, std::size_t n)
{
    return est.bandwidth_constant * std::pow(static_cast<double>(n), est.bandwidth_exponent);
}

std::optional<double> estimate(const EstimatorSpec& est, const Sample& s, double h)
{
    switch (est.estimator) {
    case RateEstimator::kernel: {
        const KernelDensityModel m(s, h, est.kernel);
        const auto e = kernel_mode(m, SearchGrid{est.search_resolution, 3.0});
        if (!e.converged)
            return std::nullopt;
        return e.location(0);
    }
    case RateEstimator::sample_point: {
        const KernelDensityModel m(s, h, est.kernel);
        return sample_point_mode(m).location(0);
    }
    case RateEstimator::half_sample:
        return robertson_cryer_mode(s, 0.5).location;
    }
    return std::nullopt;
}

} // namespace

RateReport simulate_rate(const EstimatorSpec& est, const MixtureSpec& distribution,
                         const std::vector<std::size_t>& n_grid, std::size_t replicates, const SeedSpec& seed)
{
    if (n_grid.size() < 2)
        throw InvalidArgument("the n grid needs at least two sample sizes");
    for (std::size_t a = 0; a < n_grid.size(); ++a) {
        if (n_grid[a] < 2 || (a > 0 && n_grid[a] <= n_grid[a - 1]))
            throw InvalidArgument("the n grid must be strictly increasing and start at 2 or more");
    }
    if (replicates < 50)
        throw InvalidArgument("at least 50 replicates are required");
    if (est.estimator != RateEstimator::half_sample && !est.kernel.differentiable())
        throw InvalidArgument("kernel mode estimation needs a differentiable kernel");

    RateReport report;
    report.n_grid = n_grid;
    report.replicates = replicates;
    report.truth = mixture_mode_truth(distribution);
    const double theta = report.truth.theta;

    const auto fun = kernel_functionals(est.kernel);
    report.v_k2 = report.truth.f / (report.truth.f2 * report.truth.f2) * fun.r_kprime;
    report.b_k = 0.5 * std::pow(est.bandwidth_constant, 3.5) * report.truth.f3 / report.truth.f2 * fun.mu2;
    if (est.estimator == RateEstimator::kernel) {
        // Variance decays like (n h^3)^{-1/2}, bias like h^2.
        const double a = -est.bandwidth_exponent;
        report.theoretical_slope = -std::min((1.0 - 3.0 * a) / 2.0, 2.0 * a);
    } else {
        report.theoretical_slope = std::numeric_limits<double>::quiet_NaN();
    }

    std::vector<double> log_n;
    std::vector<double> log_rmse;
    for (std::size_t a = 0; a < n_grid.size(); ++a) {
        const std::size_t n = n_grid[a];
        const double h = bandwidth_for(est, n);
        std::vector<std::optional<double>> errors(replicates);
        parallel_for(replicates, [&](std::size_t r) {
            const auto draw = sample_mixture(distribution, n, seed.substream(a * replicates + r));
            try {
                const auto loc = estimate(est, draw.sample, h);
                if (loc && std::isfinite(*loc))
                    errors[r] = *loc - theta;
            } catch (const Error&) {
                errors[r].reset();
            }
        });
        std::size_t failed = 0;
        double sum = 0.0, sum2 = 0.0;
        for (const auto& e : errors) {
            if (!e) {
                ++failed;
                continue;
            }
            sum += *e;
            sum2 += *e * *e;
        }
        if (static_cast<double>(failed) > 0.01 * static_cast<double>(replicates))
            throw NumericalError("estimator failed in " + std::to_string(failed) + " of " +
                                 std::to_string(replicates) + " replicates at n = " + std::to_string(n));
        const auto ok = static_cast<double>(replicates - failed);
        const double mean = sum / ok;
        const double var = ok > 1.0 ? (sum2 - ok * mean * mean) / (ok - 1.0) : 0.0;
        report.failures.push_back(failed);
        report.bias.push_back(mean);
        report.rmse.push_back(std::sqrt(sum2 / ok));
        report.scaled_variance.push_back(static_cast<double>(n) * h * h * h * var);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_rmse.push_back(std::log(report.rmse.back()));
    }
    for (double r : report.rmse) {
        if (!(r > 0.0))
            throw NumericalError("zero RMSE: the estimator returned the exact mode in every replicate");
    }
    std::tie(report.slope, report.slope_se) = ols_slope(log_n, log_rmse);
    return report;
}

nlohmann::json to_json(const RateReport& r)
{
    nlohmann::json j;
    j["n_grid"] = r.n_grid;
    j["replicates"] = r.replicates;
    j["rmse"] = r.rmse;
    j["bias"] = r.bias;
    j["scaled_variance"] = r.scaled_variance;
    j["failures"] = r.failures;
    j["slope"] = r.slope;
    j["slope_se"] = r.slope_se;
    j["theoretical_slope"] = std::isfinite(r.theoretical_slope) ? nlohmann::json(r.theoretical_slope) : nlohmann::json();
    j["v_k2"] = r.v_k2;
    j["b_k"] = r.b_k;
    j["truth"] = {{"theta", r.truth.theta}, {"f", r.truth.f}, {"f2", r.truth.f2}, {"f3", r.truth.f3}};
    return j;
}

} // namespace modal
