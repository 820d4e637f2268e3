#pragma once

#include "modal/density_model.hpp"
#include "modal/mixture.hpp"
#include "modal/rng.hpp"
#include "modal/sample.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <limits>
#include <vector>

namespace modal {

//! Evaluable Gaussian mixture density, either known or fitted by EM.
class GaussianMixtureModel : public DensityModel {
public:
    explicit GaussianMixtureModel(MixtureSpec spec);

    std::size_t dim() const override { return spec_.dim(); }
    double density(const Point& x) const override;
    bool has_gradient() const override { return true; }
    Point gradient(const Point& x) const override;
    std::optional<Eigen::MatrixXd> hessian(const Point& x) const override;
    double scale() const override { return scale_; }

    const MixtureSpec& spec() const { return spec_; }
    std::size_t components() const { return spec_.components(); }

    //! log(w_l) + log N(x; mu_l, Sigma_l).
    double weighted_log_component(std::size_t l, const Point& x) const;
    double log_density(const Point& x) const;

    //! f, f', f'', f''' for univariate mixtures.
    std::array<double, 4> derivatives_1d(double x) const;

    //! Number of free parameters: L - 1 + L d + L d (d + 1) / 2.
    std::size_t parameter_count() const;

    // Filled in by the EM fit; NaN / empty for a model built from a spec.
    double log_likelihood = std::numeric_limits<double>::quiet_NaN();
    double bic = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> log_likelihood_trace;
    int restarts_collapsed = 0;

private:
    struct Component {
        Eigen::LLT<Eigen::MatrixXd> chol;
        Eigen::MatrixXd precision;
        double log_norm = 0.0; //!< log w - d/2 log(2 pi) - 1/2 log det Sigma
    };
    MixtureSpec spec_;
    std::vector<Component> comps_;
    double scale_ = 1.0;
};

struct EmOptions {
    int max_iterations = 500;
    //! Stop when the mean per-observation log-likelihood changes by less.
    double tolerance = 1e-8;
    int initializations = 10;
    //! Collapse threshold relative to the smallest per-coordinate data variance.
    double covariance_floor = 1e-8;
};

//! Maximum-likelihood fit of an L-component mixture; best of several
//! k-means++-seeded EM runs. Throws DegenerateFit when every run collapses.
GaussianMixtureModel fit_gmm_em(const Sample& s, std::size_t components, const SeedSpec& seed,
                                const EmOptions& options = {});

//! Fits L = 1..max_components and returns the fit with minimal
//! BIC = -2 log L + params log n.
GaussianMixtureModel select_gmm_bic(const Sample& s, std::size_t max_components, const SeedSpec& seed,
                                    const EmOptions& options = {});

nlohmann::json to_json(const GaussianMixtureModel& model);
GaussianMixtureModel gmm_from_json(const nlohmann::json& j);

} // namespace modal
