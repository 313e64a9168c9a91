#pragma once

#include "cnk/problem.hpp"

namespace cnk {

/// Brown almost linear function, m = n:
///   f_k(x) = x_k + sum_i x_i - (n + 1),  k < n
///   f_n(x) = prod_i x_i - 1
/// Root at ones(n).
class BrownProblem final : public Problem {
 public:
  explicit BrownProblem(Index n);

  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  std::string name() const override;

  Vector residual(const Vector& x) const override;
  Vector gradient_row(Index i, const Vector& x) const override;
  Vector row_grad_sq_norms(const Vector& x) const override;
  DenseMatrix jacobian_rows(const Vector& x, const IndexList& rows) const override;
  std::optional<Vector> known_solution() const override { return Vector::Ones(n_); }
  bool row_is_affine(Index i) const override { return i + 1 < n_; }

  /// Standard starting point 0.5 * ones(n).
  Vector default_start() const { return Vector::Constant(n_, 0.5); }

 private:
  /// Leave-one-out products prod_{l != j} x_l, computed with prefix and suffix
  /// products so zeros in x are handled exactly.
  Vector product_gradient(const Vector& x) const;

  Index n_;
};

}  // namespace cnk
