#pragma once

#include <string>
#include <string_view>

namespace modal {

enum class KernelFamily { gaussian, uniform, epanechnikov };

//! Univariate kernel K with unit integral; multivariate models use products.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;

    double value(double u) const;
    //! K'(u); zero almost everywhere for the uniform kernel.
    double derivative(double u) const;
    //! Second derivative K''(u) (zero a.e. for uniform, constant inside the
    //! support for Epanechnikov).
    double second_derivative(double u) const;
    //! Half-width of the support (infinite for the gaussian kernel).
    double support() const;
    bool differentiable() const { return family != KernelFamily::uniform; }

    std::string name() const;
    static KernelSpec parse(std::string_view name);
};

//! R(K') = int K'(x)^2 dx and mu_2(K) = int x^2 K(x) dx.
struct KernelFunctionals {
    double r_kprime = 0.0;
    double mu2 = 0.0;
};

KernelFunctionals kernel_functionals(const KernelSpec& kernel);

} // namespace modal
