#pragma once

#include "modal/density_model.hpp"

#include <vector>

namespace modal {

struct AscentConfig {
    //! Converged once a step moves less than tolerance * model.scale().
    double tolerance = 1e-8;
    std::size_t max_iterations = 2000;
    //! Try a Newton step first whenever the Hessian is negative definite;
    //! it is kept only if it does not lower the density.
    bool newton = true;
    bool record_steps = false;
};

//! Discretised steepest-ascent curve started at `origin`.
struct AscentPath {
    Point origin;
    std::vector<Point> steps;
    Point terminal;
    double terminal_density = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    //! Terminal is a stationary point that is not a local maximum.
    bool saddle = false;
};

//! Mean-shift updates when the model offers them (gaussian KDE), otherwise
//! gradient ascent with a backtracking line search. Throws NumericalError on
//! a non-finite gradient.
AscentPath ascent_path(const DensityModel& model, const Point& origin, const AscentConfig& cfg = {});

//! True when some nearby point along a coordinate axis or a diagonal has
//! higher density than x (probe radius `radius`).
bool is_saddle_or_antimode(const DensityModel& model, const Point& x, double radius);

} // namespace modal
