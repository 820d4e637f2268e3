#pragma once

#include "modal/density_model.hpp"
#include "modal/sample.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace modal {

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    std::size_t count = 2;

    double step() const { return count > 1 ? (hi - lo) / static_cast<double>(count - 1) : 0.0; }
    double at(std::size_t i) const;
};

//! Regular grid of nodes with one density level per node. Node i has
//! multi-index (i_0, i_1, ...) with the first axis varying fastest.
//! Neighbors are the 2d axis-adjacent nodes (2 in 1-d, 4-connectivity in 2-d).
class EvalGrid {
public:
    EvalGrid(std::vector<Axis> axes, std::vector<double> levels);

    //! Levels on the unit-spaced 1-d grid 0, 1, ..., n-1.
    static EvalGrid from_levels(std::vector<double> levels);
    //! Row-major levels of a rows x cols grid; node (r, c) sits at (c, r).
    static EvalGrid from_levels_2d(std::size_t rows, std::size_t cols, std::vector<double> levels);

    //! Evaluates the model at every node; each axis needs at least
    //! `min_count` nodes. Throws NumericalError if any level is not finite.
    static EvalGrid evaluate(const DensityModel& model, std::vector<Axis> axes, std::size_t min_count = 16);

    std::size_t size() const { return levels_.size(); }
    std::size_t dim() const { return axes_.size(); }
    const std::vector<Axis>& axes() const { return axes_; }
    const std::vector<double>& levels() const { return levels_; }
    double level(std::size_t node) const { return levels_[node]; }

    std::vector<std::size_t> multi_index(std::size_t node) const;
    Point coordinate(std::size_t node) const;
    bool on_boundary(std::size_t node) const;
    void for_each_neighbor(std::size_t node, const std::function<void(std::size_t)>& fn) const;
    std::vector<std::size_t> neighbors(std::size_t node) const;

private:
    std::vector<Axis> axes_;
    std::vector<double> levels_;
    std::vector<std::size_t> strides_;
};

//! Axes covering the sample's bounding box widened by margin[j] per side.
std::vector<Axis> covering_axes(const Sample& s, const Point& margin, std::size_t resolution);

} // namespace modal
