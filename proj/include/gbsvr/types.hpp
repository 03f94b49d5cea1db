#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace gbsvr {

using Scalar = double;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Malformed or unreadable input data (CSV parse failures, ragged rows, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical breakdown (non-finite objective, diverged solve, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gbsvr
