#include "modal/mixture.hpp"

#include "modal/error.hpp"

#include <cmath>
#include <numbers>

namespace modal {

void MixtureSpec::validate() const
{
    const auto L = weights.size();
    if (L == 0)
        throw InvalidArgument("mixture needs at least one component");
    if (means.size() != L || covariances.size() != L)
        throw InvalidArgument("mixture weights, means and covariances differ in length");
    const auto d = static_cast<Eigen::Index>(dim());
    if (d == 0)
        throw InvalidArgument("mixture dimension must be positive");
    double total = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        if (!(weights[l] > 0.0) || !std::isfinite(weights[l]))
            throw InvalidArgument("mixture weight " + std::to_string(l) + " must be strictly positive");
        total += weights[l];
        if (means[l].size() != d || !means[l].allFinite())
            throw InvalidArgument("mixture mean " + std::to_string(l) + " has the wrong shape or is not finite");
        const auto& c = covariances[l];
        if (c.rows() != d || c.cols() != d || !c.allFinite())
            throw InvalidArgument("mixture covariance " + std::to_string(l) + " has the wrong shape");
        if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + c.cwiseAbs().maxCoeff()))
            throw InvalidArgument("mixture covariance " + std::to_string(l) + " is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c, Eigen::EigenvaluesOnly);
        if (!(eig.eigenvalues().minCoeff() > 0.0))
            throw InvalidArgument("mixture covariance " + std::to_string(l) + " is not positive definite");
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw InvalidArgument("mixture weights must sum to one");
}

Point MixtureSpec::mean() const
{
    Point m = Point::Zero(static_cast<Eigen::Index>(dim()));
    for (std::size_t l = 0; l < components(); ++l)
        m += weights[l] * means[l];
    return m;
}

Eigen::MatrixXd MixtureSpec::covariance() const
{
    const auto d = static_cast<Eigen::Index>(dim());
    const Point m = mean();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t l = 0; l < components(); ++l) {
        const Point diff = means[l] - m;
        c += weights[l] * (covariances[l] + diff * diff.transpose());
    }
    return c;
}

LabeledSample sample_mixture(const MixtureSpec& spec, std::size_t n, const SeedSpec& seed)
{
    spec.validate();
    if (n == 0)
        throw InvalidArgument("sample size must be at least 1");
    const auto d = spec.dim();
    std::vector<Eigen::MatrixXd> factors;
    factors.reserve(spec.components());
    for (const auto& c : spec.covariances)
        factors.emplace_back(Eigen::LLT<Eigen::MatrixXd>(c).matrixL());

    auto engine = make_engine(seed);
    std::discrete_distribution<int> pick(spec.weights.begin(), spec.weights.end());
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> coords(n * d);
    std::vector<int> labels(n);
    Point z(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        const int l = spec.components() == 1 ? 0 : pick(engine);
        for (auto& zj : z)
            zj = normal(engine);
        const Point x = spec.means[static_cast<std::size_t>(l)] + factors[static_cast<std::size_t>(l)] * z;
        std::copy(x.data(), x.data() + d, coords.begin() + static_cast<std::ptrdiff_t>(i * d));
        labels[i] = l;
    }
    return {Sample(std::move(coords), d, "mixture"), std::move(labels)};
}

namespace presets {

namespace {
Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }
Point scalar_point(double v) { return Point::Constant(1, v); }
} // namespace

MixtureSpec gauss()
{
    return {{1.0}, {scalar_point(0.0)}, {scalar(1.0)}};
}

MixtureSpec mw3()
{
    MixtureSpec spec;
    for (int l = 0; l < 8; ++l) {
        const double r = std::pow(2.0 / 3.0, l);
        spec.weights.push_back(1.0 / 8.0);
        spec.means.push_back(scalar_point(3.0 * (r - 1.0)));
        spec.covariances.push_back(scalar(r * r));
    }
    return spec;
}

MixtureSpec trimodal_sep8()
{
    MixtureSpec spec;
    const double h = 8.0 * std::numbers::sqrt3 / 2.0;
    for (const auto& [x, y] : {std::pair{0.0, 0.0}, std::pair{8.0, 0.0}, std::pair{4.0, h}}) {
        spec.weights.push_back(1.0 / 3.0);
        spec.means.push_back(Point{{x, y}});
        spec.covariances.push_back(Eigen::MatrixXd::Identity(2, 2));
    }
    return spec;
}

MixtureSpec by_name(const std::string& name)
{
    if (name == "gauss")
        return gauss();
    if (name == "mw3")
        return mw3();
    if (name == "trimodal-sep8")
        return trimodal_sep8();
    throw InvalidArgument("unknown distribution preset '" + name + "'");
}

} // namespace presets

} // namespace modal
