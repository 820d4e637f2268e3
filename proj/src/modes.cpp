#include "modal/modes.hpp"

#include "modal/ascent.hpp"
#include "modal/error.hpp"
#include "modal/kde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace modal {

ModeCount count_modes(const EvalGrid& grid)
{
    const std::size_t n = grid.size();
    std::vector<bool> seen(n, false);
    ModeCount out;
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start])
            continue;
        // Flood the maximal plateau of equal level containing `start`.
        const double c = grid.level(start);
        std::vector<std::size_t> plateau;
        bool is_max = true;
        stack.assign(1, start);
        seen[start] = true;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            plateau.push_back(v);
            grid.for_each_neighbor(v, [&](std::size_t u) {
                const double lu = grid.level(u);
                if (lu == c) {
                    if (!seen[u]) {
                        seen[u] = true;
                        stack.push_back(u);
                    }
                } else if (lu > c) {
                    is_max = false;
                }
            });
        }
        if (!is_max)
            continue;
        std::sort(plateau.begin(), plateau.end());
        GridMode m;
        m.level = c;
        m.nodes = plateau;
        m.grid_location = Point::Zero(static_cast<Eigen::Index>(grid.dim()));
        for (const auto v : plateau) {
            m.grid_location += grid.coordinate(v);
            m.boundary = m.boundary || grid.on_boundary(v);
        }
        m.grid_location /= static_cast<double>(plateau.size());
        m.location = m.grid_location;
        out.boundary = out.boundary || m.boundary;
        out.modes.push_back(std::move(m));
    }
    std::sort(out.modes.begin(), out.modes.end(),
              [](const GridMode& a, const GridMode& b) { return a.nodes.front() < b.nodes.front(); });
    out.count = out.modes.size();

    // Two modes within two nodes of each other (Chebyshev distance in index space).
    for (std::size_t a = 0; a < out.modes.size() && !out.too_coarse; ++a) {
        for (std::size_t b = a + 1; b < out.modes.size() && !out.too_coarse; ++b) {
            for (const auto va : out.modes[a].nodes) {
                const auto ia = grid.multi_index(va);
                for (const auto vb : out.modes[b].nodes) {
                    const auto ib = grid.multi_index(vb);
                    std::size_t cheb = 0;
                    for (std::size_t k = 0; k < ia.size(); ++k)
                        cheb = std::max(cheb, ia[k] > ib[k] ? ia[k] - ib[k] : ib[k] - ia[k]);
                    if (cheb <= 2)
                        out.too_coarse = true;
                }
            }
        }
    }
    return out;
}

ModeCount count_modes(const DensityModel& model, const std::vector<Axis>& axes, const CountOptions& opts)
{
    const EvalGrid grid = EvalGrid::evaluate(model, axes);
    ModeCount out = count_modes(grid);
    if (opts.refine && model.has_gradient()) {
        for (auto& m : out.modes) {
            if (m.boundary)
                continue;
            const AscentPath path = ascent_path(model, m.grid_location);
            if (path.converged && !path.saddle)
                m.location = path.terminal;
        }
    }
    return out;
}

ModeTree mode_tree(const Sample& s, std::vector<double> bandwidths, const ModeTreeOptions& opts)
{
    s.values(); // univariate only
    if (bandwidths.empty())
        throw InvalidArgument("mode tree needs at least one bandwidth");
    for (std::size_t j = 0; j < bandwidths.size(); ++j) {
        if (!(bandwidths[j] > 0.0))
            throw InvalidArgument("bandwidths must be positive");
        if (j > 0 && !(bandwidths[j] < bandwidths[j - 1]))
            throw InvalidArgument("bandwidths must be strictly decreasing");
    }
    auto shared = std::make_shared<const Sample>(s);
    auto modes_at = [&](double h) {
        const KernelDensityModel kde(shared, Point::Constant(1, h));
        const auto axes = covering_axes(s, Point::Constant(1, opts.margin * h), opts.resolution);
        const ModeCount mc = count_modes(kde, axes, {opts.refine});
        std::vector<double> locs;
        for (const auto& m : mc.modes)
            locs.push_back(m.location[0]);
        std::sort(locs.begin(), locs.end());
        return locs;
    };

    ModeTree tree;
    std::vector<std::vector<double>> modes;
    std::vector<double> top = modes_at(bandwidths.front());
    std::vector<double> prepended;
    while (top.size() != 1) {
        if (tree.extensions == opts.max_doublings)
            throw NumericalError("no unimodal bandwidth found after " + std::to_string(opts.max_doublings) +
                                 " doublings");
        const double h = 2.0 * (prepended.empty() ? bandwidths.front() : prepended.front());
        prepended.insert(prepended.begin(), h);
        ++tree.extensions;
        top = modes_at(h);
    }
    tree.bandwidths = prepended;
    tree.bandwidths.insert(tree.bandwidths.end(), bandwidths.begin(), bandwidths.end());

    for (std::size_t j = 0; j < tree.bandwidths.size(); ++j) {
        tree.modes.push_back(j == 0 ? top : modes_at(tree.bandwidths[j]));
        std::vector<int> links;
        for (const double x : tree.modes.back()) {
            if (j == 0) {
                links.push_back(-1);
                continue;
            }
            const auto& prev = tree.modes[j - 1];
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < prev.size(); ++q) {
                const double dist = std::abs(prev[q] - x);
                if (dist < best_d) {
                    best_d = dist;
                    best = static_cast<int>(q);
                }
            }
            links.push_back(best);
        }
        tree.links.push_back(std::move(links));
    }
    return tree;
}

nlohmann::json to_json(const ModeCount& mc)
{
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : mc.modes) {
        modes.push_back({{"location", std::vector<double>(m.location.data(), m.location.data() + m.location.size())},
                         {"grid_location", std::vector<double>(m.grid_location.data(),
                                                               m.grid_location.data() + m.grid_location.size())},
                         {"level", m.level},
                         {"boundary", m.boundary}});
    }
    return {{"count", mc.count}, {"modes", modes}, {"boundary", mc.boundary}, {"too_coarse", mc.too_coarse}};
}

nlohmann::json to_json(const ModeTree& tree)
{
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t j = 0; j < tree.bandwidths.size(); ++j)
        levels.push_back({{"bandwidth", tree.bandwidths[j]}, {"modes", tree.modes[j]}, {"links", tree.links[j]}});
    return {{"extensions", tree.extensions}, {"levels", levels}};
}

} // namespace modal
