#pragma once

#include "modal/sample.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace modal {

enum class SlopeState { increasing, decreasing, inconclusive, sparse };

std::string to_string(SlopeState s);

//! Scale-space significance map of the gaussian-kernel density derivative.
//! Cell (i, j) refers to x_grid[i] and h_grid[j].
struct SizerMap {
    std::vector<double> x_grid;
    std::vector<double> h_grid;
    double confidence = 0.95;
    double z = 0.0;
    std::vector<SlopeState> states;
    std::vector<double> derivative;
    std::vector<double> std_error;
    std::vector<double> effective_size;

    SlopeState state(std::size_t i, std::size_t j) const { return states[i * h_grid.size() + j]; }
    double slope(std::size_t i, std::size_t j) const { return derivative[i * h_grid.size() + j]; }
};

//! Pointwise test of f'_h(x) = n^{-1} sum K'_h(x - X_i) against z * SE, with
//! SE the standard deviation of the summands over sqrt(n). Cells whose
//! effective sample size n 2h f_h(x) is below 5 are marked sparse.
SizerMap sizer_map(const Sample& s, const std::vector<double>& x_grid, const std::vector<double>& h_grid,
                   double confidence = 0.95);

nlohmann::json to_json(const SizerMap& map);

} // namespace modal
