#pragma once

#include "modal/kde.hpp"
#include "modal/nn_density.hpp"

#include <nlohmann/json.hpp>

namespace modal {

struct ModeEstimate {
    Point location;
    double density_value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

//! Search grid for the coarse stage: per-axis resolution over the data range
//! widened by `margin` bandwidths on each side.
struct SearchGrid {
    std::size_t resolution = 128;
    double margin = 3.0;
};

//! Global maximiser of a kernel density estimate: coarse grid argmax, then
//! ascent to stationarity (step norm <= 1e-8 min h).
ModeEstimate kernel_mode(const KernelDensityModel& m, const SearchGrid& search = {});

//! Sample point with the highest estimated density (smallest index on ties).
ModeEstimate sample_point_mode(const KernelDensityModel& m);
//! Nearest-neighbor variant; densities at sample points exclude the point
//! itself (see NearestNeighborModel::leave_one_out_density).
ModeEstimate sample_point_mode(const NearestNeighborModel& m);

nlohmann::json to_json(const ModeEstimate& e, const std::string& method);

} // namespace modal
