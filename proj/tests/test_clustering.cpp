#include "modal/ascent.hpp"
#include "modal/clustering.hpp"
#include "modal/error.hpp"
#include "modal/gmm.hpp"
#include "modal/grid.hpp"
#include "modal/kde.hpp"
#include "modal/modes.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace modal;

namespace {

Point p1(double x) { return Point::Constant(1, x); }

MixtureSpec two_normals(double gap, double w = 0.5)
{
    return {{w, 1.0 - w}, {p1(0.0), p1(gap)}, {Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)}};
}

void check_partition(const Partition& p, std::size_t n)
{
    REQUIRE(p.labels.size() == n);
    CHECK(p.representatives.size() == p.r);
    std::vector<std::size_t> sizes(p.r + 1, 0);
    for (int l : p.labels) {
        REQUIRE(l >= 0);
        REQUIRE(static_cast<std::size_t>(l) <= p.r);
        ++sizes[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 1; c <= p.r; ++c)
        CHECK(sizes[c] > 0);
}

} // namespace

TEST_CASE("ascent examples")
{
    const KernelDensityModel single(Sample::from_values({0.0}), 1.0);
    for (double start : {-3.0, 0.5, 4.0}) {
        const auto path = ascent_path(single, p1(start));
        CHECK(path.converged);
        CHECK(std::abs(path.terminal(0)) <= 1e-7);
    }

    const KernelDensityModel pair(Sample::from_values({-1.0, 1.0}), 0.5);
    const auto still = ascent_path(pair, p1(0.0));
    CHECK(still.terminal(0) == 0.0);
    CHECK(still.converged);
    CHECK(still.saddle);

    const KernelDensityModel narrow(Sample::from_values({-1.0, 1.0}), 0.3);
    const double right = oracle::argmax_1d([&](double x) { return narrow.density(p1(x)); }, 0.0, 2.0);
    const auto path = ascent_path(narrow, p1(0.9));
    CHECK(path.converged);
    CHECK_FALSE(path.saddle);
    CHECK(std::abs(path.terminal(0) - right) <= 1e-4);

    const KernelDensityModel box(Sample::from_values({0.0}), 1.0, {KernelFamily::uniform});
    CHECK_THROWS_AS(ascent_path(box, p1(0.0)), UnsupportedOperation);
}

TEST_CASE("ascent raises the gaussian kernel density at every step")
{
    const auto draw = sample_mixture(presets::trimodal_sep8(), 200, {40, 0});
    const KernelDensityModel m(draw.sample, 1.0);
    AscentConfig cfg;
    cfg.record_steps = true;
    for (std::size_t i = 0; i < 50; ++i) {
        const auto path = ascent_path(m, draw.sample.point(i), cfg);
        CHECK(path.converged);
        for (std::size_t s = 1; s < path.steps.size(); ++s)
            CHECK(m.density(path.steps[s]) >= m.density(path.steps[s - 1]) * (1.0 - 1e-12));
        const auto again = ascent_path(m, path.terminal, cfg);
        CHECK((again.terminal - path.terminal).norm() < cfg.tolerance * m.scale() * 10);
    }
}

TEST_CASE("ascent without a mean shift uses backtracking")
{
    const auto draw = sample_mixture(two_normals(5.0), 300, {41, 0});
    const KernelDensityModel epa(draw.sample, 0.8, {KernelFamily::epanechnikov});
    const GaussianMixtureModel gmm(two_normals(5.0));
    AscentConfig cfg;
    cfg.record_steps = true;
    for (double start : {-1.0, 1.5, 3.7, 6.0}) {
        const auto a = ascent_path(epa, p1(start), cfg);
        CHECK(a.converged);
        for (std::size_t s = 1; s < a.steps.size(); ++s)
            CHECK(epa.density(a.steps[s]) >= epa.density(a.steps[s - 1]) * (1.0 - 1e-12));
        const auto b = ascent_path(gmm, p1(start));
        CHECK(b.converged);
        // The mixture has one mode near each component mean.
        const double target = start < 2.5 ? 0.0 : 5.0;
        const double ref = oracle::argmax_1d([&](double x) { return gmm.density(p1(x)); }, target - 1, target + 1);
        CHECK(std::abs(b.terminal(0) - ref) <= 1e-6);
    }
}

TEST_CASE("ascent is translation equivariant")
{
    const auto draw = sample_mixture(presets::trimodal_sep8(), 150, {42, 0});
    const Point shift = (Point(2) << 13.5, -7.25).finished();
    const Sample moved = draw.sample.affine(1.0, shift);
    const KernelDensityModel a(draw.sample, 1.2);
    const KernelDensityModel b(moved, 1.2);
    for (std::size_t i = 0; i < 30; ++i) {
        const auto pa = ascent_path(a, draw.sample.point(i));
        const auto pb = ascent_path(b, moved.point(i));
        CHECK((pb.terminal - (pa.terminal + shift)).norm() <= 1e-9);
    }
}

TEST_CASE("modal partition of separated clusters")
{
    const auto draw = sample_mixture(presets::trimodal_sep8(), 900, {43, 0});
    const KernelDensityModel m(draw.sample, normal_reference_bandwidth(draw.sample));
    const Partition p = modal_partition(m, draw.sample);
    check_partition(p, draw.sample.size());
    CHECK(p.r == 3);
    CHECK(label_agreement(p.labels, draw.labels) >= 0.99);
    CHECK(p.unassigned_count() == 0);
    // Representatives come out in lexicographic order.
    for (std::size_t c = 1; c < p.r; ++c)
        CHECK(p.representatives[c - 1](0) <= p.representatives[c](0));

    // Labels depend only on the model: a subset maps to the same modes.
    std::vector<Point> subset;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < draw.sample.size(); i += 7) {
        subset.push_back(draw.sample.point(i));
        idx.push_back(i);
    }
    const Partition q = modal_partition(m, Sample::from_points(subset));
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const auto& full = p.representatives[static_cast<std::size_t>(p.labels[idx[j]] - 1)];
        const auto& part = q.representatives[static_cast<std::size_t>(q.labels[j] - 1)];
        CHECK((full - part).norm() <= 1e-3 * m.scale());
    }
}

TEST_CASE("number of modal clusters equals the grid mode count")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto draw = sample_mixture(presets::mw3(), 150, {44, seed});
        const KernelDensityModel m(draw.sample, 0.25);
        const Partition p = modal_partition(m, draw.sample);
        check_partition(p, draw.sample.size());
        const auto axes = covering_axes(draw.sample, Point::Constant(1, 0.75), 4000);
        // Modes whose basin holds no sample point are invisible to the
        // partition, so the grid count bounds r from above.
        const std::size_t grid = count_modes(m, axes, {false}).count;
        CHECK(p.r <= grid);
        std::size_t populated = 0;
        const auto modes = count_modes(m, axes);
        for (const auto& gm : modes.modes) {
            for (const auto& rep : p.representatives) {
                if (std::abs(rep(0) - gm.location(0)) <= 1e-3 * m.scale()) {
                    ++populated;
                    break;
                }
            }
        }
        CHECK(populated == p.r);
    }
    const auto tri = sample_mixture(presets::trimodal_sep8(), 300, {45, 0});
    const KernelDensityModel m2(tri.sample, 1.0);
    const auto axes2 = covering_axes(tri.sample, Point::Constant(2, 3.0), 120);
    CHECK(modal_partition(m2, tri.sample).r == count_modes(m2, axes2).count);
}

TEST_CASE("unimodal model gives one cluster")
{
    const auto draw = sample_mixture(presets::gauss(), 300, {46, 0});
    const GaussianMixtureModel gmm(presets::gauss());
    const Partition p = gmm_modal_partition(gmm, draw.sample);
    CHECK(p.r == 1);
    CHECK(p.unassigned_count() == 0);
}

TEST_CASE("parametric partition")
{
    const GaussianMixtureModel gmm(two_normals(4.0));
    const Sample pts = Sample::from_values({1.0, 2.0, 3.5});
    const Partition p = parametric_partition(gmm, pts);
    CHECK(p.labels == std::vector<int>{1, 1, 2});
    CHECK_FALSE(p.boundary[0]);
    CHECK(p.boundary[1]);
    CHECK(std::exp(gmm.weighted_log_component(0, p1(1.0))) == doctest::Approx(0.5 * 0.2419707).epsilon(1e-6));

    const Partition left = parametric_partition(gmm, Sample::from_values({-1.0, 0.5}));
    CHECK(left.r == 1);
    CHECK(left.labels == std::vector<int>{1, 1});

    const GaussianMixtureModel one(presets::gauss());
    const auto draw = sample_mixture(presets::gauss(), 100, {47, 0});
    const Partition a = parametric_partition(one, draw.sample);
    const Partition b = gmm_modal_partition(one, draw.sample);
    CHECK(a.r == 1);
    CHECK(a.labels == b.labels);
}

TEST_CASE("mixture modes versus mixture components")
{
    const auto close = sample_mixture(two_normals(1.0), 1000, {48, 0});
    const auto fit = fit_gmm_em(close.sample, 2, {48, 1});
    CHECK(fit.components() == 2);
    CHECK(gmm_modal_partition(fit, close.sample).r == 1);

    const auto far = sample_mixture(two_normals(8.0), 1000, {49, 0});
    const auto fit_far = fit_gmm_em(far.sample, 2, {49, 1});
    const Partition modal = gmm_modal_partition(fit_far, far.sample);
    const Partition param = parametric_partition(fit_far, far.sample);
    CHECK(modal.r == 2);
    CHECK(label_agreement(modal.labels, param.labels) >= 0.99);
}

TEST_CASE("label agreement")
{
    CHECK(label_agreement({1, 1, 2, 2}, {5, 5, 3, 3}) == 1.0);
    CHECK(label_agreement({1, 2, 2, 2}, {0, 0, 1, 1}) == 0.75);
    CHECK(label_agreement({0, 1}, {0, 0}) == 0.5);
    CHECK_THROWS_AS(label_agreement({1}, {1, 2}), InvalidArgument);
}
