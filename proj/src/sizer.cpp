#include "modal/sizer.hpp"

#include "modal/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <numbers>

namespace modal {

std::string to_string(SlopeState s)
{
    switch (s) {
    case SlopeState::increasing:
        return "increasing";
    case SlopeState::decreasing:
        return "decreasing";
    case SlopeState::inconclusive:
        return "inconclusive";
    case SlopeState::sparse:
        return "sparse";
    }
    return "?";
}

SizerMap sizer_map(const Sample& s, const std::vector<double>& x_grid, const std::vector<double>& h_grid,
                   double confidence)
{
    const auto data = s.values();
    if (!(confidence > 0.0 && confidence < 1.0))
        throw InvalidArgument("confidence level must lie in (0, 1)");
    if (x_grid.empty() || h_grid.empty())
        throw InvalidArgument("sizer grids must be non-empty");
    for (const double h : h_grid) {
        if (!(h > 0.0))
            throw InvalidArgument("sizer bandwidths must be positive");
    }

    SizerMap map;
    map.x_grid = x_grid;
    map.h_grid = h_grid;
    map.confidence = confidence;
    map.z = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
    const std::size_t cells = x_grid.size() * h_grid.size();
    map.states.resize(cells);
    map.derivative.resize(cells);
    map.std_error.resize(cells);
    map.effective_size.resize(cells);

    const double n = static_cast<double>(data.size());
    const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
    for (std::size_t i = 0; i < x_grid.size(); ++i) {
        for (std::size_t j = 0; j < h_grid.size(); ++j) {
            const double h = h_grid[j];
            double sum_k = 0.0;
            double sum_d = 0.0;
            double sum_d2 = 0.0;
            for (const double xi : data) {
                const double u = (x_grid[i] - xi) / h;
                const double k = inv_sqrt_2pi * std::exp(-0.5 * u * u);
                const double d = -u * k / (h * h);
                sum_k += k / h;
                sum_d += d;
                sum_d2 += d * d;
            }
            const double mean_d = sum_d / n;
            const double var_d = data.size() > 1 ? std::max(0.0, (sum_d2 - n * mean_d * mean_d) / (n - 1.0)) : 0.0;
            const double se = std::sqrt(var_d / n);
            const double ess = n * 2.0 * h * (sum_k / n);
            const std::size_t c = i * h_grid.size() + j;
            map.derivative[c] = mean_d;
            map.std_error[c] = se;
            map.effective_size[c] = ess;
            if (ess < 5.0)
                map.states[c] = SlopeState::sparse;
            else if (mean_d > map.z * se)
                map.states[c] = SlopeState::increasing;
            else if (mean_d < -map.z * se)
                map.states[c] = SlopeState::decreasing;
            else
                map.states[c] = SlopeState::inconclusive;
        }
    }
    return map;
}

nlohmann::json to_json(const SizerMap& map)
{
    std::vector<std::string> states;
    states.reserve(map.states.size());
    for (const auto st : map.states)
        states.push_back(to_string(st));
    return {{"x_grid", map.x_grid},
            {"h_grid", map.h_grid},
            {"confidence", map.confidence},
            {"z", map.z},
            {"layout", "row i = x_grid[i], column j = h_grid[j]"},
            {"states", states},
            {"derivative", map.derivative},
            {"std_error", map.std_error},
            {"effective_size", map.effective_size}};
}

} // namespace modal
