#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace cnk {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;

/// Dense row-major storage for Jacobians and data matrices.
using DenseMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Zero-based row indices. Index sets are kept sorted ascending.
using IndexList = std::vector<Index>;

}  // namespace cnk
