#include "cnk/problem.hpp"

#include "cnk/error.hpp"

namespace cnk {

Vector Problem::row_grad_sq_norms(const Vector& x) const {
  Vector out(rows());
  for (Index i = 0; i < rows(); ++i) out[i] = gradient_row(i, x).squaredNorm();
  return out;
}

DenseMatrix Problem::jacobian_rows(const Vector& x, const IndexList& rows) const {
  DenseMatrix J(static_cast<Index>(rows.size()), cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    J.row(static_cast<Index>(r)) = gradient_row(rows[r], x).transpose();
  }
  return J;
}

DenseMatrix Problem::jacobian(const Vector& x) const {
  IndexList all(static_cast<std::size_t>(rows()));
  for (Index i = 0; i < rows(); ++i) all[static_cast<std::size_t>(i)] = i;
  return jacobian_rows(x, all);
}

bool known_root_check(const Problem& problem, double tol) {
  const auto xs = problem.known_solution();
  if (!xs) return false;
  return problem.residual(*xs).squaredNorm() < tol;
}

void check_dimension(const Problem& problem, const Vector& x) {
  if (x.size() != problem.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                problem.name() + ": expected " + std::to_string(problem.cols()) +
                    " unknowns, got " + std::to_string(x.size()));
  }
}

}  // namespace cnk
