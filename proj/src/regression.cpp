#include "modal/regression.hpp"

#include "modal/error.hpp"
#include "modal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <tuple>

namespace modal {

namespace {

constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

struct Weighted {
    double y;
    double w;
};

// Weighted kernel sums around y: S0 = sum w k, S1 = sum w k (Y - y), S2 = sum w k (Y - y)^2.
// Points are sorted by y, and those beyond 8 hy contribute below exp(-32).
struct Sums {
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
};

Sums kernel_sums(const std::vector<Weighted>& pts, double y, double hy)
{
    const auto by_y = [](const Weighted& p, double v) { return p.y < v; };
    auto it = std::lower_bound(pts.begin(), pts.end(), y - 8.0 * hy, by_y);
    const double stop = y + 8.0 * hy;
    Sums s;
    const double inv = 1.0 / hy;
    for (; it != pts.end() && it->y <= stop; ++it) {
        const double d = it->y - y;
        const double u = d * inv;
        const double wk = it->w * std::exp(-0.5 * u * u);
        s.s0 += wk;
        s.s1 += wk * d;
        s.s2 += wk * d * d;
    }
    return s;
}

} // namespace

ConditionalModel::ConditionalModel(Sample joint, double hx, double hy) : joint_(std::move(joint)), hx_(hx), hy_(hy)
{
    if (joint_.dim() != 2)
        throw DataError("conditional model needs a bivariate (x, y) sample");
    if (!(hx_ > 0.0) || !(hy_ > 0.0) || !std::isfinite(hx_) || !std::isfinite(hy_))
        throw InvalidArgument("conditional bandwidths must be positive");
}

double ConditionalModel::effective_size(double x) const
{
    double s = 0.0;
    for (std::size_t i = 0; i < joint_.size(); ++i) {
        const double u = (x - joint_.at(i, 0)) / hx_;
        s += std::exp(-0.5 * u * u);
    }
    return s;
}

double ConditionalModel::conditional_density(double x, double y) const
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < joint_.size(); ++i) {
        const double u = (x - joint_.at(i, 0)) / hx_;
        const double v = (y - joint_.at(i, 1)) / hy_;
        const double w = std::exp(-0.5 * u * u);
        den += w;
        num += w * std::exp(-0.5 * v * v);
    }
    if (!(den > 0.0))
        throw SparseRegion("no observations near x = " + std::to_string(x));
    return num / den * inv_sqrt_2pi / hy_;
}

std::vector<ConditionalMode> conditional_modes(const ConditionalModel& m, double x, const ConditionalModeOptions& opts)
{
    const Sample& joint = m.joint();
    const double hx = m.hx();
    const double hy = m.hy();
    std::vector<Weighted> local;
    double ess = 0.0;
    double wmax = 0.0;
    for (std::size_t i = 0; i < joint.size(); ++i) {
        const double u = (x - joint.at(i, 0)) / hx;
        const double w = std::exp(-0.5 * u * u);
        ess += w;
        wmax = std::max(wmax, w);
        if (w > 0.0)
            local.push_back({joint.at(i, 1), w});
    }
    if (!(ess > 5.0))
        throw SparseRegion("local sample size " + std::to_string(ess) + " at x = " + std::to_string(x) +
                           " is too small");
    // Negligible weights do not move the iteration.
    std::erase_if(local, [&](const Weighted& p) { return p.w < 1e-8 * wmax; });
    std::sort(local.begin(), local.end(), [](const Weighted& a, const Weighted& b) { return a.y < b.y; });

    // Sample y-values as starts, thinned so consecutive starts are at least
    // start_spacing * hy apart; isolated points always start a search.
    std::vector<double> starts;
    for (const auto& p : local) {
        if (starts.empty() || p.y - starts.back() >= opts.start_spacing * hy)
            starts.push_back(p.y);
    }

    const double tol = opts.tolerance * hy;
    const double near = opts.dedupe * hy;
    std::vector<double> terminals;
    for (double y : starts) {
        Sums s = kernel_sums(local, y, hy);
        bool converged = false;
        bool known = false;
        for (std::size_t iter = 0; iter < opts.max_iterations && s.s0 > 0.0; ++iter) {
            double next = y + s.s1 / s.s0; // mean shift
            Sums next_sums;
            const double curvature = s.s2 - s.s0 * hy * hy; // proportional to g''
            bool took_newton = false;
            if (curvature < 0.0) {
                const double newton = y - s.s1 * hy * hy / curvature;
                next_sums = kernel_sums(local, newton, hy);
                if (next_sums.s0 >= s.s0 * (1.0 - 1e-13)) {
                    next = newton;
                    took_newton = true;
                }
            }
            if (!took_newton)
                next_sums = kernel_sums(local, next, hy);
            const double moved = std::abs(next - y);
            y = next;
            s = next_sums;
            if (moved <= tol) {
                converged = true;
                break;
            }
            // In one dimension the iteration cannot pass through a mode, so
            // arriving next to a known one means converging to it.
            if (std::any_of(terminals.begin(), terminals.end(), [&](double t) { return std::abs(t - y) <= 0.1 * near; })) {
                known = true;
                break;
            }
        }
        if (known || !converged)
            continue;
        const double probe = 1e-3 * hy;
        const double f0 = s.s0;
        if (kernel_sums(local, y - probe, hy).s0 > f0 || kernel_sums(local, y + probe, hy).s0 > f0)
            continue; // stationary but not a maximum
        terminals.push_back(y);
    }
    if (terminals.empty())
        throw NumericalError("no conditional-mode search converged at x = " + std::to_string(x));

    std::sort(terminals.begin(), terminals.end());
    std::vector<ConditionalMode> modes;
    for (const double y : terminals) {
        const double f = m.conditional_density(x, y);
        if (!modes.empty() && y - modes.back().y <= opts.dedupe * hy) {
            if (f > modes.back().density)
                modes.back() = {y, f};
            continue;
        }
        modes.push_back({y, f});
    }
    return modes;
}

std::size_t ModalCurveSet::branch_count_at(std::size_t grid_index) const
{
    std::size_t c = 0;
    for (const auto& b : branches) {
        for (const auto& p : b) {
            if (p.grid_index == grid_index) {
                ++c;
                break;
            }
        }
    }
    return c;
}

ModalCurveSet modal_regression_curves(const ConditionalModel& m, const std::vector<double>& x_grid,
                                      const CurveOptions& opts)
{
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1]))
            throw InvalidArgument("x grid must be strictly increasing");
    }
    ModalCurveSet out;
    out.x_grid = x_grid;
    out.modes_at.resize(x_grid.size());
    out.global_curve.resize(x_grid.size());
    parallel_for(x_grid.size(), [&](std::size_t g) {
        try {
            out.modes_at[g] = conditional_modes(m, x_grid[g], opts.modes);
        } catch (const SparseRegion&) {
            out.modes_at[g].clear();
        }
    });
    for (std::size_t g = 0; g < x_grid.size(); ++g) {
        const auto& modes = out.modes_at[g];
        if (modes.empty())
            continue;
        const auto best = std::max_element(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
            return a.density < b.density;
        });
        out.global_curve[g] = *best;
    }
    out.mean_curve = local_linear_regression(m.joint(), x_grid, opts.mean_bandwidth.value_or(m.hx()));

    const double threshold = opts.link_threshold * m.hy();
    std::vector<std::size_t> open; // branch ids alive at the previous grid point
    for (std::size_t g = 0; g < x_grid.size(); ++g) {
        const auto& modes = out.modes_at[g];
        std::vector<std::tuple<double, std::size_t, std::size_t>> pairs; // (distance, open idx, mode idx)
        for (std::size_t b = 0; b < open.size(); ++b) {
            const double last = out.branches[open[b]].back().y;
            for (std::size_t j = 0; j < modes.size(); ++j) {
                const double d = std::abs(modes[j].y - last);
                if (d <= threshold)
                    pairs.emplace_back(d, b, j);
            }
        }
        std::sort(pairs.begin(), pairs.end());
        std::vector<int> branch_for_mode(modes.size(), -1);
        std::vector<bool> used(open.size(), false);
        for (const auto& [d, b, j] : pairs) {
            if (used[b] || branch_for_mode[j] >= 0)
                continue;
            used[b] = true;
            branch_for_mode[j] = static_cast<int>(open[b]);
        }
        std::vector<std::size_t> next_open;
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const BranchPoint pt{x_grid[g], modes[j].y, modes[j].density, g};
            if (branch_for_mode[j] < 0) {
                out.branches.push_back({pt});
                next_open.push_back(out.branches.size() - 1);
            } else {
                out.branches[static_cast<std::size_t>(branch_for_mode[j])].push_back(pt);
                next_open.push_back(static_cast<std::size_t>(branch_for_mode[j]));
            }
        }
        open = std::move(next_open);
    }
    return out;
}

std::vector<std::optional<double>> local_linear_regression(const Sample& joint, const std::vector<double>& x_grid,
                                                           double h)
{
    if (joint.dim() != 2)
        throw DataError("local-linear regression needs a bivariate (x, y) sample");
    if (!(h > 0.0))
        throw InvalidArgument("bandwidth must be positive");
    std::vector<std::optional<double>> out(x_grid.size());
    for (std::size_t g = 0; g < x_grid.size(); ++g) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
        for (std::size_t i = 0; i < joint.size(); ++i) {
            const double d = joint.at(i, 0) - x_grid[g];
            const double u = d / h;
            const double w = std::exp(-0.5 * u * u);
            const double y = joint.at(i, 1);
            s0 += w;
            s1 += w * d;
            s2 += w * d * d;
            t0 += w * y;
            t1 += w * d * y;
        }
        const double det = s0 * s2 - s1 * s1;
        if (!(s0 > 0.0) || !(det > 1e-12 * s0 * s2))
            continue;
        out[g] = (s2 * t0 - s1 * t1) / det;
    }
    return out;
}

nlohmann::json to_json(const ModalCurveSet& curves)
{
    nlohmann::json branches = nlohmann::json::array();
    for (std::size_t b = 0; b < curves.branches.size(); ++b) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : curves.branches[b])
            pts.push_back({{"x", p.x}, {"y", p.y}, {"density", p.density}});
        branches.push_back({{"id", b}, {"points", pts}});
    }
    nlohmann::json global = nlohmann::json::array();
    nlohmann::json mean = nlohmann::json::array();
    for (std::size_t g = 0; g < curves.x_grid.size(); ++g) {
        global.push_back(curves.global_curve[g] ? nlohmann::json(curves.global_curve[g]->y) : nlohmann::json());
        mean.push_back(curves.mean_curve[g] ? nlohmann::json(*curves.mean_curve[g]) : nlohmann::json());
    }
    return {{"x_grid", curves.x_grid}, {"branches", branches}, {"global_curve", global}, {"mean_curve", mean}};
}

std::string to_csv(const ModalCurveSet& curves)
{
    std::ostringstream out;
    out.precision(17);
    out << "x,branch,y,density\n";
    for (std::size_t b = 0; b < curves.branches.size(); ++b) {
        for (const auto& p : curves.branches[b])
            out << p.x << ',' << b << ',' << p.y << ',' << p.density << '\n';
    }
    return out.str();
}

} // namespace modal
