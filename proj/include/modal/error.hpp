#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modal {

//! Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

//! Malformed or out-of-contract input data (bad CSV cell, wrong dimension, ...).
class DataError : public Error {
public:
    using Error::Error;
};

//! Input file could not be read; carries the row/column of the offending cell
//! when the problem is a parse failure.
class CsvError : public DataError {
public:
    CsvError(const std::string& what, std::size_t row, std::size_t column)
        : DataError(what), row_(row), column_(column) {}

    std::size_t row() const { return row_; }
    std::size_t column() const { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

//! A parameter lies outside its documented range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

//! The model does not implement the requested operation (e.g. gradient of
//! the uniform kernel).
class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

//! Nearest-neighbor density at a point whose k-th neighbor distance is zero.
class InfiniteDensity : public Error {
public:
    using Error::Error;
};

//! Every EM restart collapsed a covariance.
class DegenerateFit : public Error {
public:
    using Error::Error;
};

//! Numerical failure (non-finite gradient, non-finite grid value).
class NumericalError : public Error {
public:
    using Error::Error;
};

//! Local sample too small for a conditional estimate.
class SparseRegion : public Error {
public:
    using Error::Error;
};

} // namespace modal
