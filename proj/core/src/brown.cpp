#include "cnk/problems/brown.hpp"

#include "cnk/error.hpp"

namespace cnk {

BrownProblem::BrownProblem(Index n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "Brown dimension must be positive");
}

std::string BrownProblem::name() const { return "brown" + std::to_string(n_); }

Vector BrownProblem::residual(const Vector& x) const {
  check_dimension(*this, x);
  const double shift = x.sum() - static_cast<double>(n_ + 1);
  Vector f(n_);
  for (Index k = 0; k + 1 < n_; ++k) f[k] = x[k] + shift;
  f[n_ - 1] = x.prod() - 1.0;
  return f;
}

Vector BrownProblem::product_gradient(const Vector& x) const {
  Vector g(n_);
  double prefix = 1.0;
  for (Index j = 0; j < n_; ++j) {
    g[j] = prefix;
    prefix *= x[j];
  }
  double suffix = 1.0;
  for (Index j = n_ - 1; j >= 0; --j) {
    g[j] *= suffix;
    suffix *= x[j];
  }
  return g;
}

Vector BrownProblem::gradient_row(Index i, const Vector& x) const {
  check_dimension(*this, x);
  if (i < 0 || i >= n_) throw Error(ErrorCode::DimensionMismatch, "Brown row index out of range");
  if (i == n_ - 1) return product_gradient(x);
  Vector g = Vector::Ones(n_);
  g[i] = 2.0;
  return g;
}

Vector BrownProblem::row_grad_sq_norms(const Vector& x) const {
  check_dimension(*this, x);
  Vector out = Vector::Constant(n_, static_cast<double>(n_ + 3));
  out[n_ - 1] = product_gradient(x).squaredNorm();
  return out;
}

DenseMatrix BrownProblem::jacobian_rows(const Vector& x, const IndexList& rows) const {
  check_dimension(*this, x);
  DenseMatrix J = DenseMatrix::Ones(static_cast<Index>(rows.size()), n_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index i = rows[r];
    if (i < 0 || i >= n_) throw Error(ErrorCode::DimensionMismatch, "Brown row index out of range");
    if (i == n_ - 1) {
      J.row(static_cast<Index>(r)) = product_gradient(x).transpose();
    } else {
      J(static_cast<Index>(r), i) = 2.0;
    }
  }
  return J;
}

}  // namespace cnk
