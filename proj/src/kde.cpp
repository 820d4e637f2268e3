#include "modal/kde.hpp"

#include "modal/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace modal {

namespace {

double canonical_factor(KernelFamily f)
{
    // Ratios of canonical bandwidths delta_0(K) / delta_0(gaussian).
    switch (f) {
    case KernelFamily::gaussian:
        return 1.0;
    case KernelFamily::uniform:
        return 1.3510 / 0.7764;
    case KernelFamily::epanechnikov:
        return 1.7188 / 0.7764;
    }
    return 1.0;
}

void check_bandwidth(const Point& h, std::size_t d)
{
    if (static_cast<std::size_t>(h.size()) != d)
        throw InvalidArgument("bandwidth needs one entry per dimension");
    for (const double v : h) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument("bandwidth must be positive and finite");
    }
}

} // namespace

Point normal_reference_bandwidth(const Sample& s, const KernelSpec& kernel)
{
    const double n = static_cast<double>(s.size());
    const double d = static_cast<double>(s.dim());
    const double rate = std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
    Point h = s.stddev() * rate * canonical_factor(kernel.family);
    for (auto& v : h) {
        if (!(v > 0.0))
            v = 1.0;
    }
    return h;
}

KernelDensityModel::KernelDensityModel(std::shared_ptr<const Sample> sample, Point bandwidth, KernelSpec kernel)
    : sample_(std::move(sample)), bandwidth_(std::move(bandwidth)), kernel_(kernel)
{
    if (!sample_)
        throw InvalidArgument("kernel density model needs a sample");
    check_bandwidth(bandwidth_, sample_->dim());
    norm_ = 1.0 / (static_cast<double>(sample_->size()) * bandwidth_.prod());
}

KernelDensityModel::KernelDensityModel(const Sample& sample, Point bandwidth, KernelSpec kernel)
    : KernelDensityModel(std::make_shared<const Sample>(sample), std::move(bandwidth), kernel)
{
}

KernelDensityModel::KernelDensityModel(const Sample& sample, double bandwidth, KernelSpec kernel)
    : KernelDensityModel(sample, Point::Constant(static_cast<Eigen::Index>(sample.dim()), bandwidth), kernel)
{
}

double KernelDensityModel::density(const Point& x) const
{
    check_dim(x);
    const auto n = sample_->size();
    const auto d = sample_->dim();
    const double* data = sample_->coords().data();
    double sum = 0.0;
    if (kernel_.family == KernelFamily::gaussian) {
        if (d == 1) {
            const double x0 = x[0];
            const double inv_h = 1.0 / bandwidth_[0];
            for (std::size_t i = 0; i < n; ++i) {
                const double u = (x0 - data[i]) * inv_h;
                sum += std::exp(-0.5 * u * u);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                double q = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double u = (x[static_cast<Eigen::Index>(j)] - data[i * d + j]) /
                                     bandwidth_[static_cast<Eigen::Index>(j)];
                    q += u * u;
                }
                sum += std::exp(-0.5 * q);
            }
        }
        return sum * norm_ * std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(d));
    }
    for (std::size_t i = 0; i < n; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < d && prod != 0.0; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            prod *= kernel_.value((x[jj] - data[i * d + j]) / bandwidth_[jj]);
        }
        sum += prod;
    }
    return sum * norm_;
}

DensityModel::LocalEval KernelDensityModel::local_eval(const Point& x) const
{
    check_dim(x);
    if (!kernel_.differentiable())
        throw UnsupportedOperation("the uniform kernel has no usable gradient");
    const auto n = sample_->size();
    const auto d = sample_->dim();
    const auto di = static_cast<Eigen::Index>(d);
    const double* data = sample_->coords().data();

    LocalEval out;
    out.gradient = Point::Zero(di);
    Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(di, di);
    std::vector<double> u(d);
    std::vector<double> inv_h(d);
    for (std::size_t j = 0; j < d; ++j)
        inv_h[j] = 1.0 / bandwidth_[static_cast<Eigen::Index>(j)];

    if (kernel_.family == KernelFamily::gaussian) {
        double sum = 0.0;
        Point weighted = Point::Zero(di);
        for (std::size_t i = 0; i < n; ++i) {
            double q = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                u[j] = (x[static_cast<Eigen::Index>(j)] - data[i * d + j]) * inv_h[j];
                q += u[j] * u[j];
            }
            const double w = std::exp(-0.5 * q);
            if (w == 0.0)
                continue;
            sum += w;
            for (std::size_t j = 0; j < d; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                weighted[jj] += w * data[i * d + j];
                const double gj = u[j] * inv_h[j];
                out.gradient[jj] -= w * gj;
                for (std::size_t k = 0; k <= j; ++k)
                    hess(jj, static_cast<Eigen::Index>(k)) += w * gj * u[k] * inv_h[k];
            }
        }
        const double c = norm_ * std::pow(2.0 * std::numbers::pi, -0.5 * static_cast<double>(d));
        for (std::size_t j = 0; j < d; ++j)
            hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)) -= sum * inv_h[j] * inv_h[j];
        out.density = sum * c;
        out.gradient *= c;
        hess *= c;
        out.hessian = Eigen::MatrixXd(hess.selfadjointView<Eigen::Lower>());
        if (sum > 0.0) {
            out.mean_shift = weighted / sum;
        } else {
            // Every weight underflowed: rescale by the nearest point's weight.
            double qmin = std::numeric_limits<double>::infinity();
            std::vector<double> q(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    const double v = (x[static_cast<Eigen::Index>(j)] - data[i * d + j]) * inv_h[j];
                    s += v * v;
                }
                q[i] = s;
                qmin = std::min(qmin, s);
            }
            double wsum = 0.0;
            Point acc = Point::Zero(di);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = std::exp(-0.5 * (q[i] - qmin));
                wsum += w;
                acc += w * sample_->point(i);
            }
            out.mean_shift = acc / wsum;
        }
        return out;
    }

    // Generic product kernel (epanechnikov).
    std::vector<double> kv(d);
    std::vector<double> kd(d);
    std::vector<double> k2(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        bool zero = false;
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = (x[static_cast<Eigen::Index>(j)] - data[i * d + j]) * inv_h[j];
            if (std::abs(u[j]) > kernel_.support()) {
                zero = true;
                break;
            }
            kv[j] = kernel_.value(u[j]);
            kd[j] = kernel_.derivative(u[j]) * inv_h[j];
            k2[j] = kernel_.second_derivative(u[j]) * inv_h[j] * inv_h[j];
        }
        if (zero)
            continue;
        auto prod_except = [&](std::size_t a, std::size_t b) {
            double p = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                if (j != a && j != b)
                    p *= kv[j];
            }
            return p;
        };
        sum += prod_except(d, d);
        for (std::size_t j = 0; j < d; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            out.gradient[jj] += kd[j] * prod_except(j, d);
            hess(jj, jj) += k2[j] * prod_except(j, d);
            for (std::size_t k = 0; k < j; ++k) {
                const double v = kd[j] * kd[k] * prod_except(j, k);
                hess(jj, static_cast<Eigen::Index>(k)) += v;
                hess(static_cast<Eigen::Index>(k), jj) += v;
            }
        }
    }
    out.density = sum * norm_;
    out.gradient *= norm_;
    out.hessian = hess * norm_;
    return out;
}

Point KernelDensityModel::gradient(const Point& x) const
{
    return local_eval(x).gradient;
}

std::optional<Eigen::MatrixXd> KernelDensityModel::hessian(const Point& x) const
{
    return local_eval(x).hessian;
}

std::optional<Point> KernelDensityModel::mean_shift(const Point& x) const
{
    if (kernel_.family != KernelFamily::gaussian)
        return std::nullopt;
    return local_eval(x).mean_shift;
}

} // namespace modal
