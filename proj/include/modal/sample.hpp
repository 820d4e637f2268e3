#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace modal {

using Point = Eigen::VectorXd;
using ConstPointRef = Eigen::Map<const Eigen::VectorXd>;

//! Immutable set of n points in R^d, stored row-major.
//!
//! Every coordinate is finite and the sample holds at least one point; the
//! constructor enforces both.
class Sample {
public:
    Sample(std::vector<double> coords, std::size_t dim, std::string source_tag = {});

    static Sample from_points(const std::vector<Point>& points, std::string source_tag = {});
    static Sample from_values(std::vector<double> values, std::string source_tag = {});

    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    const std::string& source_tag() const { return source_tag_; }

    ConstPointRef point(std::size_t i) const { return ConstPointRef(coords_.data() + i * dim_, dim_); }
    double at(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }

    std::span<const double> coords() const { return coords_; }
    std::vector<double> column(std::size_t j) const;

    //! Univariate view; throws DataError when dim() != 1.
    std::span<const double> values() const;

    //! Translate-and-scale copy, x -> scale * x + shift (used by equivariance checks).
    Sample affine(double scale, const Point& shift) const;

    Point mean() const;
    //! Per-coordinate sample standard deviation (divisor n - 1; zero for n = 1).
    Point stddev() const;

private:
    std::vector<double> coords_;
    std::size_t dim_;
    std::string source_tag_;
};

//! Order statistics X_(1) <= ... <= X_(n) of a univariate sample; stable for ties.
std::vector<double> order_statistics(const Sample& s);

} // namespace modal
