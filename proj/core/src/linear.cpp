#include "cnk/problems/linear.hpp"

#include "cnk/error.hpp"
#include "cnk/rng.hpp"

namespace cnk {

LinearProblem::LinearProblem(DenseMatrix a, Vector b, std::optional<Vector> solution)
    : a_(std::move(a)), b_(std::move(b)), solution_(std::move(solution)) {
  if (a_.rows() < 1 || a_.cols() < 1) throw Error(ErrorCode::DimensionMismatch, "linear system must be nonempty");
  if (a_.rows() != b_.size()) throw Error(ErrorCode::DimensionMismatch, "A rows != b length");
  if (solution_ && solution_->size() != a_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "solution length != A cols");
  }
  row_norms_sq_ = a_.rowwise().squaredNorm();
}

std::string LinearProblem::name() const {
  return "linear" + std::to_string(a_.rows()) + "x" + std::to_string(a_.cols());
}

Vector LinearProblem::residual(const Vector& x) const {
  check_dimension(*this, x);
  return a_ * x - b_;
}

Vector LinearProblem::gradient_row(Index i, const Vector& x) const {
  check_dimension(*this, x);
  return a_.row(i).transpose();
}

Vector LinearProblem::row_grad_sq_norms(const Vector&) const { return row_norms_sq_; }

DenseMatrix LinearProblem::jacobian_rows(const Vector&, const IndexList& rows) const {
  DenseMatrix J(static_cast<Index>(rows.size()), a_.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) J.row(static_cast<Index>(r)) = a_.row(rows[r]);
  return J;
}

LinearProblem make_linear(DenseMatrix a, Vector b, std::optional<Vector> solution) {
  return LinearProblem(std::move(a), std::move(b), std::move(solution));
}

LinearProblem make_random_consistent_linear(Index m, Index n, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix a(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  Vector xs = rng.normal_vector(n);
  Vector b = a * xs;
  return LinearProblem(std::move(a), std::move(b), std::move(xs));
}

}  // namespace cnk
