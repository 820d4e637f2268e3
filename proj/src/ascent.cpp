#include "modal/ascent.hpp"

#include "modal/error.hpp"

#include <cmath>

namespace modal {

namespace {

bool negative_definite(const Eigen::MatrixXd& h)
{
    Eigen::LLT<Eigen::MatrixXd> llt(-h);
    return llt.info() == Eigen::Success;
}

} // namespace

bool is_saddle_or_antimode(const DensityModel& model, const Point& x, double radius)
{
    const double f0 = model.density(x);
    const auto d = x.size();
    const double slack = 1e-14 * std::abs(f0);
    auto higher = [&](const Point& dir) {
        return model.density(x + radius * dir) > f0 + slack || model.density(x - radius * dir) > f0 + slack;
    };
    for (Eigen::Index j = 0; j < d; ++j) {
        if (higher(Point::Unit(d, j)))
            return true;
        for (Eigen::Index k = 0; k < j; ++k) {
            if (higher((Point::Unit(d, j) + Point::Unit(d, k)) / std::sqrt(2.0)) ||
                higher((Point::Unit(d, j) - Point::Unit(d, k)) / std::sqrt(2.0)))
                return true;
        }
    }
    return false;
}

AscentPath ascent_path(const DensityModel& model, const Point& origin, const AscentConfig& cfg)
{
    if (!model.has_gradient())
        throw UnsupportedOperation("ascent needs a density model with a gradient");
    const double scale = model.scale();
    const double tol = cfg.tolerance * scale;

    AscentPath path;
    path.origin = origin;
    Point x = origin;
    auto local = model.local_eval(x);
    if (cfg.record_steps)
        path.steps.push_back(x);

    for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
        if (!local.gradient.allFinite() || !std::isfinite(local.density))
            throw NumericalError("non-finite density or gradient during ascent");

        Point next;
        DensityModel::LocalEval next_local;
        bool accepted = false;

        if (cfg.newton && local.hessian && negative_definite(*local.hessian)) {
            // Newton step x - H^{-1} g, solved with the positive definite -H.
            const Point newton = x + Eigen::LLT<Eigen::MatrixXd>(-*local.hessian).solve(local.gradient);
            if (newton.allFinite()) {
                auto trial = model.local_eval(newton);
                // Slack for rounding: near the optimum both densities agree to
                // the last bits and a strict test would refuse the final steps.
                if (trial.density >= local.density * (1.0 - 1e-13)) {
                    next = newton;
                    next_local = std::move(trial);
                    accepted = true;
                }
            }
        }
        if (!accepted && local.mean_shift) {
            next = *local.mean_shift;
            next_local = model.local_eval(next);
            accepted = true;
        }
        if (!accepted) {
            // Gradient ascent preconditioned by scale^2 / f, with Armijo backtracking.
            const double f = std::max(local.density, std::numeric_limits<double>::min());
            const Point dir = local.gradient * (scale * scale / f);
            const double slope = local.gradient.dot(dir);
            double t = 1.0;
            for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
                const Point trial_x = x + t * dir;
                const double ft = model.density(trial_x);
                if (ft >= local.density + 1e-4 * t * slope) {
                    next = trial_x;
                    next_local = model.local_eval(next);
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                path.iterations = iter;
                path.converged = (t * dir).norm() <= tol || local.gradient.norm() == 0.0;
                break;
            }
        }

        const double moved = (next - x).norm();
        x = std::move(next);
        local = std::move(next_local);
        path.iterations = iter + 1;
        if (cfg.record_steps)
            path.steps.push_back(x);
        if (moved <= tol) {
            path.converged = true;
            break;
        }
    }
    path.terminal = x;
    path.terminal_density = local.density;
    if (path.converged)
        path.saddle = is_saddle_or_antimode(model, x, 1e-3 * scale);
    return path;
}

} // namespace modal
