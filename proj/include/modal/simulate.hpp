#pragma once

#include "modal/kernel.hpp"
#include "modal/mixture.hpp"
#include "modal/rng.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace modal {

enum class RateEstimator { kernel, sample_point, half_sample };

struct EstimatorSpec {
    RateEstimator estimator = RateEstimator::kernel;
    KernelSpec kernel{};
    //! Bandwidth h = constant * n^{exponent}.
    double bandwidth_constant = 1.0;
    double bandwidth_exponent = -1.0 / 7.0;
    std::size_t search_resolution = 64;

    static RateEstimator parse(const std::string& name);
};

//! Location and derivatives of the global mode of a univariate preset.
struct ModeTruth {
    double theta = 0.0;
    double f = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
};

ModeTruth mixture_mode_truth(const MixtureSpec& spec);

struct RateReport {
    std::vector<std::size_t> n_grid;
    std::size_t replicates = 0;
    std::vector<double> rmse;
    std::vector<double> bias;
    //! Empirical variance of sqrt(n h^3) (theta_hat - theta) per n.
    std::vector<double> scaled_variance;
    std::vector<std::size_t> failures;
    double slope = 0.0;
    double slope_se = 0.0;
    double theoretical_slope = 0.0; //!< NaN when no rate is attached
    double v_k2 = 0.0;              //!< f / f''^2 * R(K')
    double b_k = 0.0;               //!< 1/2 c^{7/2} f''' / f'' mu_2(K)
    ModeTruth truth;
};

//! Monte Carlo replicates of an estimator per sample size, RMSE aggregation
//! and a least-squares log-log slope. Throws NumericalError when more than
//! 1% of the replicates at some n fail.
RateReport simulate_rate(const EstimatorSpec& est, const MixtureSpec& distribution,
                         const std::vector<std::size_t>& n_grid, std::size_t replicates, const SeedSpec& seed);

//! Ordinary least squares y = a + b x; returns (b, se(b)).
std::pair<double, double> ols_slope(const std::vector<double>& x, const std::vector<double>& y);

nlohmann::json to_json(const RateReport& r);

} // namespace modal
