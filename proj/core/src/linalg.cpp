#include "cnk/linalg.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "cnk/error.hpp"

namespace cnk {

namespace {

void require_finite(const DenseMatrix& J, const char* what) {
  if (!J.allFinite()) throw Error(ErrorCode::FactorizationFailure, std::string(what) + ": non-finite entries");
}

Eigen::CompleteOrthogonalDecomposition<DenseMatrix> factorize(const DenseMatrix& J) {
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
  // Eigen compares |pivot| against threshold * |largest pivot|, and the first
  // pivot of column-pivoted QR is the largest column norm.
  const auto scale = static_cast<double>(std::max(J.rows(), J.cols()));
  cod.setThreshold(scale * std::numeric_limits<double>::epsilon());
  cod.compute(J);
  return cod;
}

}  // namespace

Vector min_norm_least_squares(const DenseMatrix& J, const Vector& rhs) {
  if (J.rows() != rhs.size()) {
    throw Error(ErrorCode::DimensionMismatch, "min_norm_least_squares: rows != rhs length");
  }
  require_finite(J, "min_norm_least_squares");
  if (!rhs.allFinite()) throw Error(ErrorCode::FactorizationFailure, "min_norm_least_squares: non-finite rhs");
  if (J.size() == 0) return Vector::Zero(J.cols());

  const auto cod = factorize(J);
  Vector d = cod.solve(rhs);
  if (!d.allFinite()) throw Error(ErrorCode::FactorizationFailure, "min_norm_least_squares: solve produced non-finite values");
  return d;
}

DenseMatrix pseudoinverse(const DenseMatrix& J) {
  require_finite(J, "pseudoinverse");
  if (J.size() == 0) return DenseMatrix::Zero(J.cols(), J.rows());
  return factorize(J).pseudoInverse();
}

SingularExtremes singular_extremes(const DenseMatrix& J) {
  if (J.size() == 0) throw Error(ErrorCode::FactorizationFailure, "singular_extremes: empty matrix");
  require_finite(J, "singular_extremes");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  SingularExtremes out;
  out.sigma_max = s[0];
  out.h2 = J.rows() >= J.cols() ? s[s.size() - 1] : 0.0;
  return out;
}

Vector row_sq_norms(const DenseMatrix& J) { return J.rowwise().squaredNorm(); }

double frobenius_sq(const DenseMatrix& J) { return J.squaredNorm(); }

}  // namespace cnk
