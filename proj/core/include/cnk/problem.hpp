#pragma once

#include <optional>
#include <string>

#include "cnk/types.hpp"

namespace cnk {

/// A square or rectangular nonlinear system f : R^n -> R^m with analytic row gradients.
///
/// Implementations are immutable after construction and every evaluation is
/// const and reentrant, so one instance may be shared by concurrent solves.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual std::string name() const = 0;

  /// f(x), length rows().
  virtual Vector residual(const Vector& x) const = 0;

  /// Gradient of f_i at x, length cols().
  virtual Vector gradient_row(Index i, const Vector& x) const = 0;

  /// ||grad f_i(x)||^2 for every row. Default stacks gradient_row; problems
  /// with structure override it.
  virtual Vector row_grad_sq_norms(const Vector& x) const;

  /// Rows `rows` of the Jacobian, in the given order.
  virtual DenseMatrix jacobian_rows(const Vector& x, const IndexList& rows) const;

  /// Full Jacobian f'(x), rows() x cols().
  DenseMatrix jacobian(const Vector& x) const;

  virtual std::optional<Vector> known_solution() const { return std::nullopt; }

  /// True when f_i is affine in x. Its tangential-cone defect is then zero by
  /// construction rather than up to rounding.
  virtual bool row_is_affine(Index /*i*/) const { return false; }
};

/// True when a known solution is set and ||f(x*)||^2 < tol.
bool known_root_check(const Problem& problem, double tol = 1e-12);

/// Throws DimensionMismatch unless x has problem.cols() entries.
void check_dimension(const Problem& problem, const Vector& x);

}  // namespace cnk
