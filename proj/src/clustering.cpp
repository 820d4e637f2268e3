#include "modal/clustering.hpp"

#include "modal/error.hpp"
#include "modal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace modal {

std::size_t Partition::unassigned_count() const
{
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), unassigned));
}

Partition modal_partition(const DensityModel& model, const Sample& points, const ModalOptions& opts)
{
    if (points.dim() != model.dim())
        throw DataError("points and model differ in dimension");
    const std::size_t n = points.size();
    std::vector<AscentPath> paths(n);
    parallel_for(n, [&](std::size_t i) { paths[i] = ascent_path(model, points.point(i), opts.ascent); });

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        if (paths[i].converged && !paths[i].saddle)
            order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ta = paths[a].terminal;
        const auto& tb = paths[b].terminal;
        return std::lexicographical_compare(ta.data(), ta.data() + ta.size(), tb.data(), tb.data() + tb.size());
    });

    const double tol = opts.merge_tolerance * model.scale();
    Partition p;
    p.labels.assign(n, Partition::unassigned);
    p.boundary.assign(n, false);
    for (const auto i : order) {
        const auto& t = paths[i].terminal;
        int label = Partition::unassigned;
        for (std::size_t c = 0; c < p.representatives.size(); ++c) {
            if ((p.representatives[c] - t).norm() <= tol) {
                label = static_cast<int>(c + 1);
                break;
            }
        }
        if (label == Partition::unassigned) {
            p.representatives.push_back(t);
            label = static_cast<int>(p.representatives.size());
        }
        p.labels[i] = label;
    }
    p.r = p.representatives.size();
    for (const auto& rep : p.representatives)
        p.representative_density.push_back(model.density(rep));
    return p;
}

Partition parametric_partition(const GaussianMixtureModel& gmm, const Sample& points)
{
    if (points.dim() != gmm.dim())
        throw DataError("points and mixture differ in dimension");
    const std::size_t n = points.size();
    const std::size_t L = gmm.components();
    std::vector<int> component(n);
    std::vector<bool> boundary(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const Point x = points.point(i);
        std::size_t best = 0;
        double best_v = gmm.weighted_log_component(0, x);
        for (std::size_t l = 1; l < L; ++l) {
            const double v = gmm.weighted_log_component(l, x);
            if (v > best_v) {
                best_v = v;
                best = l;
            }
        }
        for (std::size_t l = 0; l < L; ++l) {
            if (l != best && std::abs(gmm.weighted_log_component(l, x) - best_v) <= 1e-12 * (1.0 + std::abs(best_v)))
                boundary[i] = true;
        }
        component[i] = static_cast<int>(best);
    }

    std::vector<int> relabel(L, 0);
    for (const int c : component)
        relabel[static_cast<std::size_t>(c)] = 1;
    Partition p;
    int next = 0;
    for (std::size_t l = 0; l < L; ++l) {
        if (relabel[l] != 0) {
            relabel[l] = ++next;
            p.representatives.push_back(gmm.spec().means[l]);
            p.representative_density.push_back(std::exp(gmm.weighted_log_component(l, gmm.spec().means[l])));
        }
    }
    p.r = static_cast<std::size_t>(next);
    p.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        p.labels[i] = relabel[static_cast<std::size_t>(component[i])];
    p.boundary = std::move(boundary);
    return p;
}

Partition gmm_modal_partition(const GaussianMixtureModel& gmm, const Sample& points, const ModalOptions& opts)
{
    return modal_partition(gmm, points, opts);
}

double label_agreement(const std::vector<int>& labels, const std::vector<int>& truth)
{
    if (labels.size() != truth.size() || labels.empty())
        throw InvalidArgument("label vectors must be non-empty and of equal length");
    std::map<int, std::size_t> li;
    std::map<int, std::size_t> ti;
    for (const int l : labels) {
        if (l != Partition::unassigned)
            li.emplace(l, li.size());
    }
    for (const int t : truth)
        ti.emplace(t, ti.size());
    const std::size_t k = std::max(li.size(), ti.size());
    if (k > 8)
        throw InvalidArgument("label agreement supports at most 8 clusters");
    std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == Partition::unassigned)
            continue;
        ++confusion[li.at(labels[i])][ti.at(truth[i])];
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t s = 0;
        for (std::size_t a = 0; a < k; ++a)
            s += confusion[a][perm[a]];
        best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(labels.size());
}

nlohmann::json to_json(const Partition& p)
{
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : p.representatives)
        reps.push_back(std::vector<double>(r.data(), r.data() + r.size()));
    nlohmann::json j{{"r", p.r}, {"labels", p.labels}, {"representatives", reps},
                     {"representative_density", p.representative_density},
                     {"unassigned", p.unassigned_count()}};
    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < p.boundary.size(); ++i) {
        if (p.boundary[i])
            boundary.push_back(i);
    }
    j["boundary_points"] = boundary;
    return j;
}

} // namespace modal
