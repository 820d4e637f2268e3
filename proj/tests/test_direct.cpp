#include "modal/direct.hpp"
#include "modal/error.hpp"
#include "modal/indirect.hpp"
#include "modal/mixture.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace modal;

namespace {

std::vector<double> random_values(Engine& eng, std::size_t n, bool ties)
{
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> small(0, 6);
    std::vector<double> v(n);
    for (auto& x : v)
        x = ties ? small(eng) * 0.5 : z(eng);
    return v;
}

Point p1(double x) { return Point::Constant(1, x); }

} // namespace

TEST_CASE("chernoff examples")
{
    const auto e = chernoff_mode(Sample::from_values({0.0, 0.1, 0.2, 5.0}), 0.15);
    CHECK(e.location == doctest::Approx(0.1));
    CHECK(e.diagnostics.at("count") == 3.0);
    const auto wide = chernoff_mode(Sample::from_values({1.0, 4.0, 2.0}), 10.0);
    CHECK(wide.location == 2.5);
    CHECK(chernoff_mode(Sample::from_values({7.0}), 0.3).location == 7.0);
    CHECK_THROWS_AS(chernoff_mode(Sample::from_values({7.0}), 0.0), InvalidArgument);
    CHECK_THROWS_AS(chernoff_mode(Sample({1.0, 2.0}, 2), 1.0), DataError);
}

TEST_CASE("dalenius-venter examples")
{
    const auto e = dalenius_venter_mode(Sample::from_values({1, 2, 3, 10}), 3);
    CHECK(e.window.lo == 1.0);
    CHECK(e.window.hi == 3.0);
    CHECK(e.location == 2.0);
    CHECK(dalenius_venter_mode(Sample::from_values({4, 1, 9}), 3).location == 5.0);
    const auto zero = dalenius_venter_mode(Sample::from_values({0, 1, 1, 1, 9}), 3);
    CHECK(zero.window.lo == 1.0);
    CHECK(zero.window.hi == 1.0);
    CHECK(zero.location == 1.0);
    CHECK_THROWS_AS(dalenius_venter_mode(Sample::from_values({1, 2}), 1), InvalidArgument);
    CHECK_THROWS_AS(dalenius_venter_mode(Sample::from_values({1, 2}), 3), InvalidArgument);
}

TEST_CASE("robertson-cryer examples")
{
    const auto w = robertson_cryer_windows(Sample::from_values({0, 1, 2, 3, 9}), 0.5);
    REQUIRE(w.size() == 3);
    CHECK(w[1].lo == 0.0);
    CHECK(w[1].hi == 2.0);
    CHECK(w[2].lo == 0.0);
    CHECK(w[2].hi == 1.0);
    CHECK(robertson_cryer_mode(Sample::from_values({0, 1, 2, 3, 9}), 0.5).location == 0.5);
    CHECK(robertson_cryer_mode(Sample::from_values({2, 6}), 0.5).location == 4.0);
    CHECK(robertson_cryer_mode(Sample::from_values({2, 6}), 0.5).method == "half-sample");
    CHECK_THROWS_AS(robertson_cryer_mode(Sample::from_values({2, 6}), 1.0), InvalidArgument);
}

TEST_CASE("robertson-cryer mirrors under negation with the mirrored tie-break")
{
    Engine eng = make_engine({17, 0});
    for (int rep = 0; rep < 200; ++rep) {
        const auto v = random_values(eng, 3 + rep % 20, rep % 2 == 0);
        std::vector<double> neg(v.size());
        std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
        const double left = robertson_cryer_mode(Sample::from_values(v), 0.5, TieBreak::leftmost).location;
        const double right = robertson_cryer_mode(Sample::from_values(neg), 0.5, TieBreak::rightmost).location;
        CHECK(right == -left);
    }
    // A symmetric sample: leftmost and rightmost ties mirror each other.
    const auto sym = Sample::from_values({-7, -3, -2.5, -0.5, 0.5, 2.5, 3, 7});
    CHECK(robertson_cryer_mode(sym, 0.5, TieBreak::leftmost).location ==
          -robertson_cryer_mode(sym, 0.5, TieBreak::rightmost).location);
}

TEST_CASE("half-sample windows are nested")
{
    Engine eng = make_engine({18, 0});
    for (int rep = 0; rep < 300; ++rep) {
        const auto v = random_values(eng, 2 + rep % 40, rep % 3 == 0);
        for (double p : {0.3, 0.5, 0.8}) {
            const auto w = robertson_cryer_windows(Sample::from_values(v), p);
            for (std::size_t j = 1; j < w.size(); ++j)
                CHECK((w[j - 1].lo <= w[j].lo && w[j].hi <= w[j - 1].hi));
        }
    }
}

TEST_CASE("direct estimators match exhaustive enumeration")
{
    Engine eng = make_engine({19, 0});
    std::uniform_int_distribution<std::size_t> size(1, 30);
    std::uniform_real_distribution<double> half(0.05, 1.5);
    for (int rep = 0; rep < 300; ++rep) {
        const auto v = random_values(eng, size(eng), rep % 2 == 1);
        const Sample s = Sample::from_values(v);
        const double a = half(eng);
        const auto ch = chernoff_mode(s, a);
        const auto ch_ref = oracle::chernoff(v, a);
        CHECK(ch.window.lo == ch_ref.lo);
        CHECK(ch.window.hi == ch_ref.hi);
        CHECK(ch.location == ch_ref.mid());
        if (v.size() >= 2) {
            const std::size_t k = 2 + static_cast<std::size_t>(rep) % (v.size() - 1);
            const auto dv = dalenius_venter_mode(s, k);
            CHECK(dv.location == oracle::dalenius_venter(v, k).mid());
        }
        for (double p : {0.5, 0.34, 0.75}) {
            const auto ref = oracle::robertson_cryer(v, p);
            const auto rc = robertson_cryer_mode(s, p);
            CHECK(rc.window.lo == ref.lo);
            CHECK(rc.window.hi == ref.hi);
        }
    }
}

TEST_CASE("grenander examples")
{
    const auto e = grenander_mode(Sample::from_values({0, 1, 3}), 1, 1.0);
    CHECK(e.location == 1.0);
    CHECK(e.diagnostics.at("A") == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(e.diagnostics.at("B") == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(e.has_flag("power-outside-(1,k)"));

    const auto flat = grenander_mode(Sample::from_values({4, 4, 4, 4}), 2, 1.5);
    CHECK(flat.location == 4.0);
    CHECK(flat.has_flag("degenerate"));

    const auto ties = grenander_mode(Sample::from_values({0, 0, 1, 3}), 1, 1.0);
    CHECK(ties.has_flag("ties-dropped"));
    CHECK(ties.location == 1.0);

    CHECK_FALSE(grenander_mode(Sample::from_values({0, 1, 3, 4, 8}), 3, 2.0).has_flag("power-outside-(1,k)"));
    CHECK_THROWS_AS(grenander_mode(Sample::from_values({0, 1}), 2, 1.0), InvalidArgument);
    CHECK_THROWS_AS(grenander_mode(Sample::from_values({0, 1}), 1, 0.0), InvalidArgument);
}

TEST_CASE("grenander estimate stays inside the data range")
{
    Engine eng = make_engine({20, 0});
    for (int rep = 0; rep < 300; ++rep) {
        const auto v = random_values(eng, 3 + rep % 30, false);
        const Sample s = Sample::from_values(v);
        const std::size_t k = 1 + static_cast<std::size_t>(rep) % (v.size() - 1);
        const auto e = grenander_mode(s, k, 0.5 + rep % 5);
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        CHECK((*lo <= e.location && e.location <= *hi));
        // Dropping the widest spacing still gives a convex combination.
        std::vector<double> x = oracle::sorted(v);
        std::size_t widest = 0;
        for (std::size_t i = 0; i + k < x.size(); ++i) {
            if (x[i + k] - x[i] > x[widest + k] - x[widest])
                widest = i;
        }
        double sw = 0.0, swm = 0.0;
        for (std::size_t i = 0; i + k < x.size(); ++i) {
            if (i == widest)
                continue;
            const double w = std::pow(x[i + k] - x[i], -(0.5 + rep % 5));
            sw += w;
            swm += w * 0.5 * (x[i] + x[i + k]);
        }
        if (sw > 0.0)
            CHECK((*lo <= swm / sw && swm / sw <= *hi));
    }
}

TEST_CASE("direct estimators are affine equivariant")
{
    Engine eng = make_engine({21, 0});
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> shift(-50.0, 50.0);
    for (int rep = 0; rep < 200; ++rep) {
        const auto v = random_values(eng, 5 + rep % 25, false);
        const Sample s = Sample::from_values(v);
        const double c = scale(eng);
        const double b = shift(eng);
        const Sample t = s.affine(c, Point::Constant(1, b));
        const double tol = 1e-9 * (std::abs(b) + c * 10.0);
        CHECK(std::abs(grenander_mode(t, 2, 1.5).location - (c * grenander_mode(s, 2, 1.5).location + b)) <= tol);
        CHECK(std::abs(dalenius_venter_mode(t, 4).location - (c * dalenius_venter_mode(s, 4).location + b)) <= tol);
        CHECK(std::abs(robertson_cryer_mode(t).location - (c * robertson_cryer_mode(s).location + b)) <= tol);
        CHECK(std::abs(chernoff_mode(t, c * 0.5).location - (c * chernoff_mode(s, 0.5).location + b)) <= tol);
        const KernelDensityModel ms(s, 0.5);
        const KernelDensityModel mt(t, 0.5 * c);
        CHECK(std::abs(kernel_mode(mt).location(0) - (c * kernel_mode(ms).location(0) + b)) <= 1e-6 * c);
    }
}

TEST_CASE("kernel mode")
{
    const auto single = kernel_mode(KernelDensityModel(Sample::from_values({0.0}), 1.0));
    CHECK(std::abs(single.location(0)) <= 1e-8);
    CHECK(single.density_value == doctest::Approx(0.398942).epsilon(1e-6));
    CHECK(single.converged);

    const KernelDensityModel pair(Sample::from_values({-1.0, 1.0}), 3.0);
    const auto m = kernel_mode(pair);
    const double ref = oracle::argmax_1d([&](double x) { return pair.density(p1(x)); }, -5, 5);
    CHECK(std::abs(m.location(0) - ref) <= 1e-6);
    CHECK(std::abs(m.location(0)) <= 1e-8);

    const auto draw = sample_mixture(presets::gauss(), 10000, {5, 0});
    const KernelDensityModel big(draw.sample, std::pow(10000.0, -1.0 / 7.0));
    CHECK(std::abs(kernel_mode(big).location(0)) <= 0.1);
}

TEST_CASE("kernel mode agrees with a dense-grid search")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto draw = sample_mixture(presets::mw3(), 300, {seed, 7});
        const KernelDensityModel m(draw.sample, 0.15);
        const auto est = kernel_mode(m);
        const double ref = oracle::argmax_1d([&](double x) { return m.density(p1(x)); }, -5, 3, 40001);
        CHECK(std::abs(est.location(0) - ref) <= 1e-6);
    }
}

TEST_CASE("sample-point modes")
{
    const KernelDensityModel m(Sample::from_values({0.0, 0.1, 5.0}), 1.0);
    CHECK(sample_point_mode(m).location(0) == 0.1);
    CHECK(sample_point_mode(KernelDensityModel(Sample::from_values({3.0}), 1.0)).location(0) == 3.0);

    const NearestNeighborModel nn(Sample::from_values({0.0, 0.1, 0.15, 5.0}), 1);
    CHECK(sample_point_mode(nn).location(0) == 0.1);
    const NearestNeighborModel one(Sample::from_values({2.0}), 1);
    CHECK(sample_point_mode(one).location(0) == 2.0);
}

TEST_CASE("argmax contract and dominance of the kernel mode")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto draw = sample_mixture(presets::mw3(), 200, {seed, 9});
        const KernelDensityModel m(draw.sample, 0.2);
        const auto sp = sample_point_mode(m);
        for (std::size_t i = 0; i < draw.sample.size(); ++i)
            CHECK(sp.density_value >= m.density(draw.sample.point(i)));
        CHECK(m.density(kernel_mode(m).location) >= sp.density_value);

        const NearestNeighborModel nn(draw.sample, 5);
        const auto nsp = sample_point_mode(nn);
        for (std::size_t i = 0; i < draw.sample.size(); ++i)
            CHECK(nsp.density_value >= nn.leave_one_out_density(i));
    }
}
