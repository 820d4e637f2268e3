#pragma once

#include "modal/density_model.hpp"
#include "modal/sample.hpp"

#include <memory>
#include <optional>

namespace modal {

//! Volume of the unit ball in R^d, pi^{d/2} / Gamma(1 + d/2).
double unit_ball_volume(std::size_t d);

//! f(x) = k / (n v_d ||X_(k)(x) - x||^d).
class NearestNeighborModel : public DensityModel {
public:
    NearestNeighborModel(std::shared_ptr<const Sample> sample, std::size_t k);
    NearestNeighborModel(const Sample& sample, std::size_t k);

    std::size_t dim() const override { return sample_->dim(); }
    //! Throws InfiniteDensity when the k-th neighbor distance is zero.
    double density(const Point& x) const override;
    double scale() const override;

    //! Density at sample point i with its own zero self-distance excluded:
    //! the k-th neighbor is taken among the other n - 1 points, and n - 1
    //! replaces n in the normalisation.
    double leave_one_out_density(std::size_t i) const;

    //! Distance from x to its k-th nearest sample point, optionally ignoring
    //! one sample index. Ties resolved by distance value only.
    double kth_distance(const Point& x, std::optional<std::size_t> exclude = std::nullopt) const;

    std::size_t k() const { return k_; }
    const Sample& sample() const { return *sample_; }

private:
    std::shared_ptr<const Sample> sample_;
    std::size_t k_;
    double ball_volume_;
};

} // namespace modal
