#pragma once

#include "modal/sample.hpp"

#include <Eigen/Dense>

#include <optional>

namespace modal {

//! Common evaluation interface shared by the kernel, nearest-neighbor and
//! mixture estimators.
class DensityModel {
public:
    virtual ~DensityModel() = default;

    virtual std::size_t dim() const = 0;
    virtual double density(const Point& x) const = 0;

    virtual bool has_gradient() const { return false; }
    //! Throws UnsupportedOperation unless has_gradient().
    virtual Point gradient(const Point& x) const;
    //! Analytic Hessian when the model provides one.
    virtual std::optional<Eigen::MatrixXd> hessian(const Point& x) const;

    //! One fixed-point ascent update (mean shift) when the model has one.
    virtual std::optional<Point> mean_shift(const Point& x) const;

    //! Everything an ascent step needs at x. The default calls the individual
    //! virtuals; models that can compute them in one pass override it.
    struct LocalEval {
        double density = 0.0;
        Point gradient;
        std::optional<Eigen::MatrixXd> hessian;
        std::optional<Point> mean_shift;
    };
    virtual LocalEval local_eval(const Point& x) const;

    //! Length scale of the model: minimum bandwidth or minimum component
    //! standard deviation. Tolerances are expressed relative to it.
    virtual double scale() const = 0;

protected:
    void check_dim(const Point& x) const;
};

} // namespace modal
