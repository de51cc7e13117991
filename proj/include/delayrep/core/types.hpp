#pragma once

/**
 * @file types.hpp
 * @brief Linear-algebra aliases and the exception hierarchy shared by every module.
 */

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace delayrep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A kernel or history was evaluated outside its declared interval.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A spec violates a structural or class invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerical failure: singular loop matrix, divergence, ill-conditioned discretization.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Composition produced a kernel above the configured degree cap.
class DegreeOverflow : public Error {
public:
    using Error::Error;
};

inline std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline void require_shape(const Matrix& m, Index rows, Index cols, const std::string& name) {
    if (m.rows() != rows || m.cols() != cols) {
        throw DimensionError(name + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                             ", got " + shape_str(m));
    }
}

/// Block-diagonal concatenation.
Matrix block_diag(const std::vector<Matrix>& blocks);

/// Vertical concatenation; all blocks must share a column count.
Matrix vstack(const std::vector<Matrix>& blocks);

/// Horizontal concatenation; all blocks must share a row count.
Matrix hstack(const std::vector<Matrix>& blocks);

}  // namespace delayrep
