#include "modal/density_model.hpp"

#include "modal/error.hpp"

namespace modal {

Point DensityModel::gradient(const Point&) const
{
    throw UnsupportedOperation("this density model has no gradient");
}

std::optional<Eigen::MatrixXd> DensityModel::hessian(const Point&) const
{
    return std::nullopt;
}

std::optional<Point> DensityModel::mean_shift(const Point&) const
{
    return std::nullopt;
}

DensityModel::LocalEval DensityModel::local_eval(const Point& x) const
{
    LocalEval out;
    out.density = density(x);
    out.gradient = gradient(x);
    out.hessian = hessian(x);
    out.mean_shift = mean_shift(x);
    return out;
}

void DensityModel::check_dim(const Point& x) const
{
    if (static_cast<std::size_t>(x.size()) != dim())
        throw DataError("point has dimension " + std::to_string(x.size()) + ", model expects " +
                        std::to_string(dim()));
}

} // namespace modal
