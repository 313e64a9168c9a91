#pragma once

#include "cnk/types.hpp"

namespace cnk {

/// Minimum 2-norm minimizer of ||J d - rhs||_2 (the Moore-Penrose action J^+ rhs).
///
/// Uses a complete orthogonal decomposition with column pivoting; pivots at or
/// below max(rows, cols) * eps * (largest column norm) are treated as zero.
/// Throws FactorizationFailure on non-finite input and DimensionMismatch when
/// J.rows() != rhs.size().
Vector min_norm_least_squares(const DenseMatrix& J, const Vector& rhs);

/// Moore-Penrose pseudoinverse, cols x rows, same rank rule as above.
DenseMatrix pseudoinverse(const DenseMatrix& J);

struct SingularExtremes {
  double sigma_max = 0.0;
  /// inf ||J x|| / ||x||: the smallest singular value when rows >= cols, 0 otherwise.
  double h2 = 0.0;
};

SingularExtremes singular_extremes(const DenseMatrix& J);

Vector row_sq_norms(const DenseMatrix& J);
double frobenius_sq(const DenseMatrix& J);

}  // namespace cnk
