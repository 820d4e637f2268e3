#include "modal/kernel.hpp"

#include "modal/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace modal {

namespace {
constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
}

double KernelSpec::value(double u) const
{
    switch (family) {
    case KernelFamily::gaussian:
        return inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelFamily::uniform:
        return std::abs(u) <= 1.0 ? 0.5 : 0.0;
    case KernelFamily::epanechnikov:
        return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

double KernelSpec::derivative(double u) const
{
    switch (family) {
    case KernelFamily::gaussian:
        return -u * inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelFamily::uniform:
        return 0.0;
    case KernelFamily::epanechnikov:
        return std::abs(u) <= 1.0 ? -1.5 * u : 0.0;
    }
    return 0.0;
}

double KernelSpec::second_derivative(double u) const
{
    switch (family) {
    case KernelFamily::gaussian:
        return (u * u - 1.0) * inv_sqrt_2pi * std::exp(-0.5 * u * u);
    case KernelFamily::uniform:
        return 0.0;
    case KernelFamily::epanechnikov:
        return std::abs(u) <= 1.0 ? -1.5 : 0.0;
    }
    return 0.0;
}

double KernelSpec::support() const
{
    return family == KernelFamily::gaussian ? std::numeric_limits<double>::infinity() : 1.0;
}

std::string KernelSpec::name() const
{
    switch (family) {
    case KernelFamily::gaussian:
        return "gaussian";
    case KernelFamily::uniform:
        return "uniform";
    case KernelFamily::epanechnikov:
        return "epanechnikov";
    }
    return "?";
}

KernelSpec KernelSpec::parse(std::string_view name)
{
    if (name == "gaussian")
        return {KernelFamily::gaussian};
    if (name == "uniform")
        return {KernelFamily::uniform};
    if (name == "epanechnikov")
        return {KernelFamily::epanechnikov};
    throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

KernelFunctionals kernel_functionals(const KernelSpec& kernel)
{
    switch (kernel.family) {
    case KernelFamily::gaussian:
        // int u^2 phi(u)^2 du = 1 / (4 sqrt(pi))
        return {0.25 * std::numbers::inv_sqrtpi, 1.0};
    case KernelFamily::uniform:
        return {0.0, 1.0 / 3.0};
    case KernelFamily::epanechnikov:
        // int_{-1}^{1} (3u/2)^2 du = 3/2,  int (3/4)(1 - u^2) u^2 du = 1/5
        return {1.5, 0.2};
    }
    return {};
}

} // namespace modal
