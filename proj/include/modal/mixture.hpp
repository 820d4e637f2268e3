#pragma once

#include "modal/rng.hpp"
#include "modal/sample.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace modal {

//! Parameters of a Gaussian mixture f = sum_l w_l N(mu_l, Sigma_l).
struct MixtureSpec {
    std::vector<double> weights;
    std::vector<Point> means;
    std::vector<Eigen::MatrixXd> covariances;

    std::size_t components() const { return weights.size(); }
    std::size_t dim() const { return means.empty() ? 0 : static_cast<std::size_t>(means.front().size()); }

    //! Throws InvalidArgument unless weights are strictly positive and sum to
    //! one within 1e-12, shapes agree, and every covariance is symmetric
    //! positive definite.
    void validate() const;

    Point mean() const;
    Eigen::MatrixXd covariance() const;
};

struct LabeledSample {
    Sample sample;
    std::vector<int> labels; //!< generating component, 0-based
};

//! n i.i.d. draws: component index from the weights, then a Gaussian draw.
LabeledSample sample_mixture(const MixtureSpec& spec, std::size_t n, const SeedSpec& seed);

namespace presets {

//! Standard normal N(0, 1).
MixtureSpec gauss();
//! Marron-Wand #3 "strongly skewed": sum_{l=0}^{7} 1/8 N(3((2/3)^l - 1), (2/3)^{2l}).
MixtureSpec mw3();
//! Three unit-variance bivariate Gaussians on an equilateral triangle of side 8.
MixtureSpec trimodal_sep8();

//! Lookup by name ("gauss", "mw3", "trimodal-sep8"); throws InvalidArgument.
MixtureSpec by_name(const std::string& name);

} // namespace presets

} // namespace modal
