#include "modal/gmm.hpp"

#include "modal/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace modal {

namespace {

constexpr double log_2pi = 1.8378770664093454835606594728112;

double log_sum_exp(const double* v, std::size_t count)
{
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i)
        m = std::max(m, v[i]);
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        s += std::exp(v[i] - m);
    return m + std::log(s);
}

} // namespace

GaussianMixtureModel::GaussianMixtureModel(MixtureSpec spec) : spec_(std::move(spec))
{
    spec_.validate();
    const double d = static_cast<double>(spec_.dim());
    scale_ = std::numeric_limits<double>::infinity();
    comps_.reserve(spec_.components());
    for (std::size_t l = 0; l < spec_.components(); ++l) {
        Component c;
        c.chol.compute(spec_.covariances[l]);
        if (c.chol.info() != Eigen::Success)
            throw InvalidArgument("mixture covariance is not positive definite");
        c.precision = c.chol.solve(Eigen::MatrixXd::Identity(spec_.covariances[l].rows(), spec_.covariances[l].cols()));
        const double log_det = 2.0 * c.chol.matrixLLT().diagonal().array().log().sum();
        c.log_norm = std::log(spec_.weights[l]) - 0.5 * d * log_2pi - 0.5 * log_det;
        comps_.push_back(std::move(c));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spec_.covariances[l], Eigen::EigenvaluesOnly);
        scale_ = std::min(scale_, std::sqrt(eig.eigenvalues().minCoeff()));
    }
}

double GaussianMixtureModel::weighted_log_component(std::size_t l, const Point& x) const
{
    const auto& c = comps_[l];
    const Point z = c.chol.matrixL().solve(x - spec_.means[l]);
    return c.log_norm - 0.5 * z.squaredNorm();
}

double GaussianMixtureModel::log_density(const Point& x) const
{
    check_dim(x);
    std::vector<double> terms(components());
    for (std::size_t l = 0; l < components(); ++l)
        terms[l] = weighted_log_component(l, x);
    return log_sum_exp(terms.data(), terms.size());
}

double GaussianMixtureModel::density(const Point& x) const
{
    check_dim(x);
    double s = 0.0;
    for (std::size_t l = 0; l < components(); ++l)
        s += std::exp(weighted_log_component(l, x));
    return s;
}

Point GaussianMixtureModel::gradient(const Point& x) const
{
    check_dim(x);
    Point g = Point::Zero(x.size());
    for (std::size_t l = 0; l < components(); ++l) {
        const double p = std::exp(weighted_log_component(l, x));
        g -= p * (comps_[l].precision * (x - spec_.means[l]));
    }
    return g;
}

std::optional<Eigen::MatrixXd> GaussianMixtureModel::hessian(const Point& x) const
{
    check_dim(x);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
    for (std::size_t l = 0; l < components(); ++l) {
        const double p = std::exp(weighted_log_component(l, x));
        const Point v = comps_[l].precision * (x - spec_.means[l]);
        h += p * (v * v.transpose() - comps_[l].precision);
    }
    return h;
}

std::array<double, 4> GaussianMixtureModel::derivatives_1d(double x) const
{
    if (dim() != 1)
        throw DataError("derivatives_1d needs a univariate mixture");
    std::array<double, 4> out{};
    for (std::size_t l = 0; l < components(); ++l) {
        const double sigma = std::sqrt(spec_.covariances[l](0, 0));
        const double z = (x - spec_.means[l][0]) / sigma;
        const double phi = spec_.weights[l] * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
        out[0] += phi;
        out[1] += -z / sigma * phi;
        out[2] += (z * z - 1.0) / (sigma * sigma) * phi;
        out[3] += -(z * z * z - 3.0 * z) / (sigma * sigma * sigma) * phi;
    }
    return out;
}

std::size_t GaussianMixtureModel::parameter_count() const
{
    const std::size_t L = components();
    const std::size_t d = dim();
    return L - 1 + L * d + L * d * (d + 1) / 2;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EmRun {
    MixtureSpec spec;
    double log_likelihood = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    bool collapsed = false;
};

// k-means++ seeding followed by a few Lloyd iterations.
std::vector<int> kmeans_labels(const RowMatrix& X, std::size_t L, Engine& engine)
{
    const auto n = static_cast<std::size_t>(X.rows());
    std::vector<Point> centers;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centers.emplace_back(X.row(static_cast<Eigen::Index>(first(engine))).transpose());
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (centers.size() < L) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (X.row(static_cast<Eigen::Index>(i)).transpose() - centers.back()).squaredNorm());
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double target = u(engine);
            for (pick = 0; pick + 1 < n; ++pick) {
                target -= d2[pick];
                if (target <= 0.0)
                    break;
            }
        } else {
            pick = first(engine);
        }
        centers.emplace_back(X.row(static_cast<Eigen::Index>(pick)).transpose());
    }

    std::vector<int> labels(n, 0);
    for (int iter = 0; iter < 10; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < L; ++l) {
                const double dd = (X.row(static_cast<Eigen::Index>(i)).transpose() - centers[l]).squaredNorm();
                if (dd < best_d) {
                    best_d = dd;
                    best = static_cast<int>(l);
                }
            }
            changed = changed || labels[i] != best;
            labels[i] = best;
        }
        std::vector<std::size_t> counts(L, 0);
        for (auto& c : centers)
            c.setZero();
        for (std::size_t i = 0; i < n; ++i) {
            centers[static_cast<std::size_t>(labels[i])] += X.row(static_cast<Eigen::Index>(i)).transpose();
            ++counts[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t l = 0; l < L; ++l) {
            if (counts[l] > 0)
                centers[l] /= static_cast<double>(counts[l]);
            else
                centers[l] = X.row(static_cast<Eigen::Index>(first(engine))).transpose();
        }
        if (!changed && iter > 0)
            break;
    }
    return labels;
}

bool collapsed(const Eigen::MatrixXd& cov, double floor)
{
    if (!cov.allFinite())
        return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    return !(eig.eigenvalues().minCoeff() >= floor);
}

EmRun run_em(const RowMatrix& X, std::size_t L, Engine& engine, const EmOptions& opts, double floor)
{
    const auto n = static_cast<Eigen::Index>(X.rows());
    const auto d = static_cast<Eigen::Index>(X.cols());
    const auto Li = static_cast<Eigen::Index>(L);
    EmRun run;

    // Responsibilities from the hard k-means assignment.
    Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, Li);
    if (L == 1) {
        resp.setOnes();
    } else {
        const auto labels = kmeans_labels(X, L, engine);
        for (Eigen::Index i = 0; i < n; ++i)
            resp(i, labels[static_cast<std::size_t>(i)]) = 1.0;
    }

    auto m_step = [&](MixtureSpec& spec) -> bool {
        spec.weights.assign(L, 0.0);
        spec.means.assign(L, Point::Zero(d));
        spec.covariances.assign(L, Eigen::MatrixXd::Zero(d, d));
        for (std::size_t l = 0; l < L; ++l) {
            const auto li = static_cast<Eigen::Index>(l);
            const double nl = resp.col(li).sum();
            if (!(nl > 0.0))
                return false;
            spec.weights[l] = nl / static_cast<double>(n);
            spec.means[l] = (X.transpose() * resp.col(li)) / nl;
            const RowMatrix centered = X.rowwise() - spec.means[l].transpose();
            spec.covariances[l] = (centered.transpose() * resp.col(li).asDiagonal() * centered) / nl;
            spec.covariances[l] = 0.5 * (spec.covariances[l] + spec.covariances[l].transpose()).eval();
            if (collapsed(spec.covariances[l], floor))
                return false;
        }
        double total = 0.0;
        for (const double w : spec.weights)
            total += w;
        for (double& w : spec.weights)
            w /= total;
        return true;
    };

    MixtureSpec spec;
    if (!m_step(spec)) {
        run.collapsed = true;
        return run;
    }

    std::vector<double> logp(L);
    double previous = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        GaussianMixtureModel model(spec);
        double ll = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const Point x = X.row(i).transpose();
            for (std::size_t l = 0; l < L; ++l)
                logp[l] = model.weighted_log_component(l, x);
            const double li = log_sum_exp(logp.data(), L);
            ll += li;
            for (std::size_t l = 0; l < L; ++l)
                resp(i, static_cast<Eigen::Index>(l)) = std::exp(logp[l] - li);
        }
        run.trace.push_back(ll);
        run.spec = spec;
        run.log_likelihood = ll;
        if (!std::isfinite(ll)) {
            run.collapsed = true;
            return run;
        }
        if (std::abs(ll - previous) / static_cast<double>(n) < opts.tolerance)
            break;
        previous = ll;
        MixtureSpec next;
        if (!m_step(next)) {
            run.collapsed = true;
            return run;
        }
        spec = std::move(next);
    }
    return run;
}

} // namespace

GaussianMixtureModel fit_gmm_em(const Sample& s, std::size_t components, const SeedSpec& seed,
                                const EmOptions& options)
{
    const std::size_t n = s.size();
    const std::size_t d = s.dim();
    if (components < 1)
        throw InvalidArgument("component count must be at least 1");
    if (n < components * (d + 1))
        throw InvalidArgument("need at least L (d + 1) observations for an L-component fit");

    const RowMatrix X = Eigen::Map<const RowMatrix>(s.coords().data(), static_cast<Eigen::Index>(n),
                                                    static_cast<Eigen::Index>(d));
    const RowMatrix centered = X.rowwise() - X.colwise().mean();
    const Eigen::MatrixXd global_cov = (centered.transpose() * centered) / static_cast<double>(n);
    const double min_var = global_cov.diagonal().minCoeff();
    if (!(min_var > 0.0))
        throw DegenerateFit("data has zero variance in some coordinate");
    const double floor = options.covariance_floor * min_var;

    const int inits = components == 1 ? 1 : std::max(1, options.initializations);
    EmRun best;
    int collapses = 0;
    for (int r = 0; r < inits; ++r) {
        auto engine = make_engine(seed.substream(static_cast<std::uint64_t>(r)));
        EmRun run = run_em(X, components, engine, options, floor);
        if (run.collapsed) {
            ++collapses;
            continue;
        }
        if (run.log_likelihood > best.log_likelihood)
            best = std::move(run);
    }
    if (best.trace.empty())
        throw DegenerateFit("every EM initialization collapsed a covariance");

    GaussianMixtureModel model(best.spec);
    model.log_likelihood = best.log_likelihood;
    model.log_likelihood_trace = std::move(best.trace);
    model.bic = -2.0 * model.log_likelihood +
                static_cast<double>(model.parameter_count()) * std::log(static_cast<double>(n));
    model.restarts_collapsed = collapses;
    return model;
}

GaussianMixtureModel select_gmm_bic(const Sample& s, std::size_t max_components, const SeedSpec& seed,
                                    const EmOptions& options)
{
    if (max_components < 1)
        throw InvalidArgument("Lmax must be at least 1");
    std::optional<GaussianMixtureModel> best;
    for (std::size_t L = 1; L <= max_components; ++L) {
        if (s.size() < L * (s.dim() + 1))
            break;
        GaussianMixtureModel fit = fit_gmm_em(s, L, seed, options);
        if (!best || fit.bic < best->bic)
            best = std::move(fit);
    }
    if (!best)
        throw InvalidArgument("sample too small for any mixture fit");
    return *best;
}

nlohmann::json to_json(const GaussianMixtureModel& model)
{
    nlohmann::json j;
    const auto& spec = model.spec();
    j["dim"] = spec.dim();
    j["components"] = spec.components();
    j["weights"] = spec.weights;
    auto means = nlohmann::json::array();
    auto covs = nlohmann::json::array();
    for (std::size_t l = 0; l < spec.components(); ++l) {
        means.push_back(std::vector<double>(spec.means[l].data(), spec.means[l].data() + spec.means[l].size()));
        auto rows = nlohmann::json::array();
        const auto& c = spec.covariances[l];
        for (Eigen::Index r = 0; r < c.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(c.cols()));
            for (Eigen::Index q = 0; q < c.cols(); ++q)
                row[static_cast<std::size_t>(q)] = c(r, q);
            rows.push_back(row);
        }
        covs.push_back(rows);
    }
    j["means"] = means;
    j["covariances"] = covs;
    j["log_likelihood"] = std::isfinite(model.log_likelihood) ? nlohmann::json(model.log_likelihood) : nlohmann::json();
    j["bic"] = std::isfinite(model.bic) ? nlohmann::json(model.bic) : nlohmann::json();
    return j;
}

GaussianMixtureModel gmm_from_json(const nlohmann::json& j)
{
    MixtureSpec spec;
    spec.weights = j.at("weights").get<std::vector<double>>();
    for (const auto& m : j.at("means")) {
        const auto v = m.get<std::vector<double>>();
        spec.means.emplace_back(Eigen::Map<const Point>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    for (const auto& c : j.at("covariances")) {
        const auto rows = c.get<std::vector<std::vector<double>>>();
        Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != rows.size())
                throw DataError("covariance must be square");
            for (std::size_t q = 0; q < rows.size(); ++q)
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q)) = rows[r][q];
        }
        spec.covariances.push_back(m);
    }
    GaussianMixtureModel model(std::move(spec));
    if (j.contains("log_likelihood") && j["log_likelihood"].is_number())
        model.log_likelihood = j["log_likelihood"].get<double>();
    if (j.contains("bic") && j["bic"].is_number())
        model.bic = j["bic"].get<double>();
    return model;
}

} // namespace modal
