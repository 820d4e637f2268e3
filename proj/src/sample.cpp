#include "modal/sample.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <cmath>

namespace modal {

Sample::Sample(std::vector<double> coords, std::size_t dim, std::string source_tag)
    : coords_(std::move(coords)), dim_(dim), source_tag_(std::move(source_tag))
{
    if (dim_ == 0)
        throw DataError("sample dimension must be positive");
    if (coords_.empty())
        throw DataError("sample must contain at least one point");
    if (coords_.size() % dim_ != 0)
        throw DataError("coordinate count is not a multiple of the dimension");
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i]))
            throw DataError("non-finite coordinate at point " + std::to_string(i / dim_) + ", column " +
                            std::to_string(i % dim_));
    }
}

Sample Sample::from_points(const std::vector<Point>& points, std::string source_tag)
{
    if (points.empty())
        throw DataError("sample must contain at least one point");
    const auto d = static_cast<std::size_t>(points.front().size());
    std::vector<double> coords;
    coords.reserve(points.size() * d);
    for (const auto& p : points) {
        if (static_cast<std::size_t>(p.size()) != d)
            throw DataError("all points must share the same dimension");
        coords.insert(coords.end(), p.data(), p.data() + d);
    }
    return Sample(std::move(coords), d, std::move(source_tag));
}

Sample Sample::from_values(std::vector<double> values, std::string source_tag)
{
    return Sample(std::move(values), 1, std::move(source_tag));
}

std::vector<double> Sample::column(std::size_t j) const
{
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = at(i, j);
    return out;
}

std::span<const double> Sample::values() const
{
    if (dim_ != 1)
        throw DataError("univariate sample required, got dimension " + std::to_string(dim_));
    return coords_;
}

Sample Sample::affine(double scale, const Point& shift) const
{
    std::vector<double> out(coords_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = scale * coords_[i] + shift[static_cast<Eigen::Index>(i % dim_)];
    return Sample(std::move(out), dim_, source_tag_);
}

Point Sample::mean() const
{
    Point m = Point::Zero(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < size(); ++i)
        m += point(i);
    return m / static_cast<double>(size());
}

Point Sample::stddev() const
{
    const auto n = size();
    Point sd = Point::Zero(static_cast<Eigen::Index>(dim_));
    if (n < 2)
        return sd;
    const Point m = mean();
    for (std::size_t i = 0; i < n; ++i)
        sd += (point(i) - m).array().square().matrix();
    return (sd / static_cast<double>(n - 1)).array().sqrt().matrix();
}

std::vector<double> order_statistics(const Sample& s)
{
    const auto v = s.values();
    std::vector<double> sorted(v.begin(), v.end());
    std::stable_sort(sorted.begin(), sorted.end());
    return sorted;
}

} // namespace modal
