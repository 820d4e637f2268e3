#include "modal/indirect.hpp"

#include "modal/ascent.hpp"
#include "modal/error.hpp"
#include "modal/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modal {

ModeEstimate kernel_mode(const KernelDensityModel& m, const SearchGrid& search)
{
    const EvalGrid grid = EvalGrid::evaluate(
        m, covering_axes(m.sample(), m.bandwidth() * search.margin, search.resolution), 2);

    // Candidate starts: grid nodes that are not below any neighbor, best first.
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        bool peak = true;
        grid.for_each_neighbor(i, [&](std::size_t j) { peak = peak && grid.level(j) <= grid.level(i); });
        if (peak)
            starts.push_back(i);
    }
    std::stable_sort(starts.begin(), starts.end(),
                     [&](std::size_t a, std::size_t b) { return grid.level(a) > grid.level(b); });
    if (starts.size() > 5)
        starts.resize(5);

    ModeEstimate best;
    best.density_value = -std::numeric_limits<double>::infinity();
    if (!m.has_gradient()) {
        best.location = grid.coordinate(starts.front());
        best.density_value = m.density(best.location);
        return best;
    }
    for (const auto start : starts) {
        const AscentPath path = ascent_path(m, grid.coordinate(start));
        const double f = m.density(path.terminal);
        if (f > best.density_value) {
            best.location = path.terminal;
            best.density_value = f;
            best.converged = path.converged;
            best.iterations = path.iterations;
        }
    }
    return best;
}

ModeEstimate sample_point_mode(const KernelDensityModel& m)
{
    const auto& s = m.sample();
    ModeEstimate e;
    e.density_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Point x = s.point(i);
        const double f = m.density(x);
        if (f > e.density_value) {
            e.density_value = f;
            e.location = x;
        }
    }
    e.converged = true;
    e.iterations = s.size();
    return e;
}

ModeEstimate sample_point_mode(const NearestNeighborModel& m)
{
    const auto& s = m.sample();
    ModeEstimate e;
    e.location = s.point(0);
    e.converged = true;
    e.iterations = s.size();
    if (s.size() == 1) {
        e.density_value = std::numeric_limits<double>::infinity();
        return e;
    }
    if (m.k() > s.size() - 1)
        throw InvalidArgument("k must not exceed n - 1 for the leave-one-out sample-point search");
    e.density_value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i) {
        double f = 0.0;
        try {
            f = m.leave_one_out_density(i);
        } catch (const InfiniteDensity&) {
            f = std::numeric_limits<double>::infinity();
        }
        if (f > e.density_value) {
            e.density_value = f;
            e.location = s.point(i);
        }
    }
    return e;
}

nlohmann::json to_json(const ModeEstimate& e, const std::string& method)
{
    nlohmann::json j;
    j["method"] = method;
    j["location"] = std::vector<double>(e.location.data(), e.location.data() + e.location.size());
    j["density"] = std::isfinite(e.density_value) ? nlohmann::json(e.density_value) : nlohmann::json("inf");
    j["converged"] = e.converged;
    j["iterations"] = e.iterations;
    return j;
}

} // namespace modal
