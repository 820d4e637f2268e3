#pragma once

#include "modal/grid.hpp"
#include "modal/sample.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace modal {

struct GridMode {
    Point grid_location; //!< center of the maximal plateau
    Point location;      //!< refined by ascent when the model has a gradient
    double level = 0.0;
    bool boundary = false;
    std::vector<std::size_t> nodes;
};

struct ModeCount {
    std::size_t count = 0;
    std::vector<GridMode> modes;
    bool boundary = false;   //!< some mode sits on the grid boundary
    bool too_coarse = false; //!< two modes lie within two nodes of each other
};

//! Local maxima of the grid levels; a maximal plateau whose outer neighbors
//! are all strictly lower counts once.
ModeCount count_modes(const EvalGrid& grid);

struct CountOptions {
    bool refine = true;
};
ModeCount count_modes(const DensityModel& model, const std::vector<Axis>& axes, const CountOptions& opts = {});

//! Gaussian-kernel mode locations of a univariate sample across a decreasing
//! bandwidth sweep. Each mode links to the nearest mode at the previous
//! (larger) bandwidth.
struct ModeTree {
    std::vector<double> bandwidths;          //!< strictly decreasing
    std::vector<std::vector<double>> modes;  //!< per bandwidth, ascending
    std::vector<std::vector<int>> links;     //!< index into modes[j - 1]; -1 at j = 0
    std::size_t extensions = 0;              //!< doublings prepended to reach one mode
};

struct ModeTreeOptions {
    std::size_t resolution = 512;
    double margin = 3.0;       //!< grid margin in units of the largest bandwidth
    std::size_t max_doublings = 20;
    bool refine = true;
};

ModeTree mode_tree(const Sample& s, std::vector<double> bandwidths, const ModeTreeOptions& opts = {});

nlohmann::json to_json(const ModeCount& mc);
nlohmann::json to_json(const ModeTree& tree);

} // namespace modal
