#include "modal/nn_density.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modal {

double unit_ball_volume(std::size_t d)
{
    const double half = 0.5 * static_cast<double>(d);
    return std::pow(std::numbers::pi, half) / std::tgamma(1.0 + half);
}

NearestNeighborModel::NearestNeighborModel(std::shared_ptr<const Sample> sample, std::size_t k)
    : sample_(std::move(sample)), k_(k)
{
    if (!sample_)
        throw InvalidArgument("nearest-neighbor model needs a sample");
    if (k_ < 1 || k_ > sample_->size())
        throw InvalidArgument("k must lie in [1, n]");
    ball_volume_ = unit_ball_volume(sample_->dim());
}

NearestNeighborModel::NearestNeighborModel(const Sample& sample, std::size_t k)
    : NearestNeighborModel(std::make_shared<const Sample>(sample), k)
{
}

double NearestNeighborModel::kth_distance(const Point& x, std::optional<std::size_t> exclude) const
{
    check_dim(x);
    const auto n = sample_->size();
    std::vector<double> dist;
    dist.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (exclude && *exclude == i)
            continue;
        dist.push_back((sample_->point(i) - x).squaredNorm());
    }
    if (k_ > dist.size())
        throw InvalidArgument("k exceeds the number of available neighbors");
    auto kth = dist.begin() + static_cast<std::ptrdiff_t>(k_ - 1);
    std::nth_element(dist.begin(), kth, dist.end());
    return std::sqrt(*kth);
}

double NearestNeighborModel::density(const Point& x) const
{
    const double r = kth_distance(x);
    if (r == 0.0)
        throw InfiniteDensity("k-th nearest-neighbor distance is zero");
    return static_cast<double>(k_) /
           (static_cast<double>(sample_->size()) * ball_volume_ * std::pow(r, static_cast<double>(dim())));
}

double NearestNeighborModel::leave_one_out_density(std::size_t i) const
{
    const Point x = sample_->point(i);
    const double r = kth_distance(x, i);
    if (r == 0.0)
        throw InfiniteDensity("k-th nearest-neighbor distance is zero at sample point " + std::to_string(i));
    return static_cast<double>(k_) / (static_cast<double>(sample_->size() - 1) * ball_volume_ *
                                      std::pow(r, static_cast<double>(dim())));
}

double NearestNeighborModel::scale() const
{
    const Point sd = sample_->stddev();
    const double m = sd.minCoeff();
    return m > 0.0 ? m : 1.0;
}

} // namespace modal
