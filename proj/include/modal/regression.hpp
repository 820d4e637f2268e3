#pragma once

#include "modal/sample.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace modal {

//! Kernel estimate of the conditional density of Y given X = x from a
//! bivariate sample (column 0 = X, column 1 = Y) with gaussian product kernel.
class ConditionalModel {
public:
    ConditionalModel(Sample joint, double hx, double hy);

    //! g(y | x) = sum_i K_hx(x - X_i) K_hy(y - Y_i) / sum_i K_hx(x - X_i).
    double conditional_density(double x, double y) const;
    //! sum_i exp(-u_i^2 / 2), u_i = (x - X_i) / hx: the local sample size.
    double effective_size(double x) const;

    const Sample& joint() const { return joint_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

private:
    Sample joint_;
    double hx_;
    double hy_;
};

struct ConditionalMode {
    double y = 0.0;
    double density = 0.0;
};

struct ConditionalModeOptions {
    //! Starts are sample y-values thinned to at most one per this spacing (in units of hy).
    double start_spacing = 0.25;
    double tolerance = 1e-8;     //!< in units of hy
    double dedupe = 1e-3;        //!< in units of hy
    std::size_t max_iterations = 2000;
};

//! All local maxima in y of g(y | x), sorted ascending. Throws SparseRegion
//! when the local sample size is at most 5, and NumericalError when no start
//! converges.
std::vector<ConditionalMode> conditional_modes(const ConditionalModel& m, double x,
                                               const ConditionalModeOptions& opts = {});

struct BranchPoint {
    double x = 0.0;
    double y = 0.0;
    double density = 0.0;
    std::size_t grid_index = 0;
};

struct ModalCurveSet {
    std::vector<double> x_grid;
    std::vector<std::vector<BranchPoint>> branches;
    //! Per grid x: the mode of maximal conditional density (empty when sparse).
    std::vector<std::optional<ConditionalMode>> global_curve;
    std::vector<std::optional<double>> mean_curve;
    std::vector<std::vector<ConditionalMode>> modes_at;

    std::size_t branch_count_at(std::size_t grid_index) const;
};

struct CurveOptions {
    double link_threshold = 3.0; //!< in units of hy
    ConditionalModeOptions modes{};
    //! Bandwidth of the local-linear baseline; hx when unset.
    std::optional<double> mean_bandwidth;
};

//! Conditional modes along the grid, linked into branches by nearest y
//! (pairs farther apart than the threshold end a branch / start a new one).
ModalCurveSet modal_regression_curves(const ConditionalModel& m, const std::vector<double>& x_grid,
                                      const CurveOptions& opts = {});

//! Local-linear mean regression with gaussian weights; nullopt where the
//! weighted design is singular.
std::vector<std::optional<double>> local_linear_regression(const Sample& joint, const std::vector<double>& x_grid,
                                                           double h);

nlohmann::json to_json(const ModalCurveSet& curves);
//! Rows "x,branch,y,density".
std::string to_csv(const ModalCurveSet& curves);

} // namespace modal
