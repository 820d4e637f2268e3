#include "modal/grid.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <cmath>

namespace modal {

double Axis::at(std::size_t i) const
{
    if (count <= 1)
        return lo;
    if (i + 1 == count)
        return hi;
    return lo + static_cast<double>(i) * step();
}

EvalGrid::EvalGrid(std::vector<Axis> axes, std::vector<double> levels)
    : axes_(std::move(axes)), levels_(std::move(levels))
{
    if (axes_.empty())
        throw InvalidArgument("grid needs at least one axis");
    std::size_t total = 1;
    strides_.reserve(axes_.size());
    for (const auto& a : axes_) {
        if (a.count == 0)
            throw InvalidArgument("grid axis needs at least one node");
        strides_.push_back(total);
        total *= a.count;
    }
    if (levels_.size() != total)
        throw InvalidArgument("grid level count does not match its shape");
    for (const double v : levels_) {
        if (!std::isfinite(v))
            throw NumericalError("grid levels must be finite");
    }
}

EvalGrid EvalGrid::from_levels(std::vector<double> levels)
{
    const auto n = levels.size();
    return EvalGrid({Axis{0.0, static_cast<double>(n > 0 ? n - 1 : 0), n}}, std::move(levels));
}

EvalGrid EvalGrid::from_levels_2d(std::size_t rows, std::size_t cols, std::vector<double> levels)
{
    return EvalGrid({Axis{0.0, static_cast<double>(cols - 1), cols}, Axis{0.0, static_cast<double>(rows - 1), rows}},
                    std::move(levels));
}

EvalGrid EvalGrid::evaluate(const DensityModel& model, std::vector<Axis> axes, std::size_t min_count)
{
    if (axes.size() != model.dim())
        throw InvalidArgument("grid dimension does not match the model");
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (a.count < min_count)
            throw InvalidArgument("grid resolution must be at least " + std::to_string(min_count) + " per axis");
        if (!(a.hi > a.lo))
            throw InvalidArgument("grid axis range is empty");
        total *= a.count;
    }
    EvalGrid grid(std::move(axes), std::vector<double>(total, 0.0));
    for (std::size_t i = 0; i < total; ++i) {
        const double v = model.density(grid.coordinate(i));
        if (!std::isfinite(v))
            throw NumericalError("non-finite density at grid node " + std::to_string(i));
        grid.levels_[i] = v;
    }
    return grid;
}

std::vector<std::size_t> EvalGrid::multi_index(std::size_t node) const
{
    std::vector<std::size_t> idx(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        idx[a] = node % axes_[a].count;
        node /= axes_[a].count;
    }
    return idx;
}

Point EvalGrid::coordinate(std::size_t node) const
{
    Point p(static_cast<Eigen::Index>(axes_.size()));
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        p[static_cast<Eigen::Index>(a)] = axes_[a].at(node % axes_[a].count);
        node /= axes_[a].count;
    }
    return p;
}

bool EvalGrid::on_boundary(std::size_t node) const
{
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        const std::size_t i = node % axes_[a].count;
        node /= axes_[a].count;
        if (axes_[a].count > 1 && (i == 0 || i + 1 == axes_[a].count))
            return true;
    }
    return false;
}

void EvalGrid::for_each_neighbor(std::size_t node, const std::function<void(std::size_t)>& fn) const
{
    std::size_t rest = node;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
        const std::size_t i = rest % axes_[a].count;
        rest /= axes_[a].count;
        if (i > 0)
            fn(node - strides_[a]);
        if (i + 1 < axes_[a].count)
            fn(node + strides_[a]);
    }
}

std::vector<std::size_t> EvalGrid::neighbors(std::size_t node) const
{
    std::vector<std::size_t> out;
    for_each_neighbor(node, [&](std::size_t j) { out.push_back(j); });
    return out;
}

std::vector<Axis> covering_axes(const Sample& s, const Point& margin, std::size_t resolution)
{
    std::vector<Axis> axes;
    for (std::size_t j = 0; j < s.dim(); ++j) {
        const auto col = s.column(j);
        const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
        const double pad = margin[static_cast<Eigen::Index>(j)];
        double lo = *mn - pad;
        double hi = *mx + pad;
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        axes.push_back({lo, hi, resolution});
    }
    return axes;
}

} // namespace modal
