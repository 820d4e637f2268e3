#pragma once

#include "modal/density_model.hpp"
#include "modal/kernel.hpp"
#include "modal/sample.hpp"

#include <memory>

namespace modal {

//! Normal-reference bandwidth per coordinate,
//! h_j = c_K * sigma_j * (4 / ((d + 2) n))^{1/(d+4)}, where c_K rescales the
//! gaussian rule to the kernel's canonical bandwidth. Coordinates with zero
//! spread fall back to 1.
Point normal_reference_bandwidth(const Sample& s, const KernelSpec& kernel = {});

//! f(x) = n^{-1} sum_i prod_j K((x_j - X_ij) / h_j) / h_j  (diagonal product kernel).
class KernelDensityModel : public DensityModel {
public:
    KernelDensityModel(std::shared_ptr<const Sample> sample, Point bandwidth, KernelSpec kernel = {});
    KernelDensityModel(const Sample& sample, Point bandwidth, KernelSpec kernel = {});
    //! Isotropic convenience constructor.
    KernelDensityModel(const Sample& sample, double bandwidth, KernelSpec kernel = {});

    std::size_t dim() const override { return sample_->dim(); }
    double density(const Point& x) const override;

    bool has_gradient() const override { return kernel_.differentiable(); }
    Point gradient(const Point& x) const override;
    std::optional<Eigen::MatrixXd> hessian(const Point& x) const override;
    //! Gaussian kernel only: the kernel-weighted average of the sample points.
    std::optional<Point> mean_shift(const Point& x) const override;
    double scale() const override { return bandwidth_.minCoeff(); }

    const Sample& sample() const { return *sample_; }
    std::shared_ptr<const Sample> shared_sample() const { return sample_; }
    const Point& bandwidth() const { return bandwidth_; }
    const KernelSpec& kernel() const { return kernel_; }

    //! Density, gradient, Hessian and (gaussian) mean shift in one pass.
    LocalEval local_eval(const Point& x) const override;

private:
    std::shared_ptr<const Sample> sample_;
    Point bandwidth_;
    KernelSpec kernel_;
    double norm_ = 1.0; //!< 1 / (n prod_j h_j)
};

} // namespace modal
