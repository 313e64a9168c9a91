#pragma once

#include "cnk/problem.hpp"

namespace cnk {

/// f(x) = A x - b.
class LinearProblem final : public Problem {
 public:
  LinearProblem(DenseMatrix a, Vector b, std::optional<Vector> solution = std::nullopt);

  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  std::string name() const override;

  Vector residual(const Vector& x) const override;
  Vector gradient_row(Index i, const Vector& x) const override;
  Vector row_grad_sq_norms(const Vector& x) const override;
  DenseMatrix jacobian_rows(const Vector& x, const IndexList& rows) const override;
  std::optional<Vector> known_solution() const override { return solution_; }
  bool row_is_affine(Index) const override { return true; }

  const DenseMatrix& matrix() const { return a_; }
  const Vector& rhs() const { return b_; }

 private:
  DenseMatrix a_;
  Vector b_;
  Vector row_norms_sq_;
  std::optional<Vector> solution_;
};

LinearProblem make_linear(DenseMatrix a, Vector b, std::optional<Vector> solution = std::nullopt);

/// Consistent Gaussian system: A with iid N(0,1) entries, x* ~ N(0, I), b = A x*.
LinearProblem make_random_consistent_linear(Index m, Index n, std::uint64_t seed);

}  // namespace cnk
