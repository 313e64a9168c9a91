#pragma once

#include "cnk/problem.hpp"
#include "cnk/problems/libsvm.hpp"

namespace cnk {

/// Root-finding form of L2-regularized logistic regression.
///
/// With A = [a_1 ... a_p] (d x p), unknown x = [alpha (p); w (d)], m = n = p + d:
///   rows 0..d-1      (1/(lambda p)) A alpha - w
///   rows d..d+p-1    alpha_i + phi_i'(a_i^T w),   phi_i(t) = ln(1 + exp(-y_i t))
class GlmProblem final : public Problem {
 public:
  GlmProblem(DenseMatrix samples, std::vector<double> labels, double lambda,
             std::string label = "glm");

  Index rows() const override { return p_ + d_; }
  Index cols() const override { return p_ + d_; }
  std::string name() const override { return label_; }

  Vector residual(const Vector& x) const override;
  Vector gradient_row(Index i, const Vector& x) const override;
  Vector row_grad_sq_norms(const Vector& x) const override;
  DenseMatrix jacobian_rows(const Vector& x, const IndexList& rows) const override;
  std::optional<Vector> known_solution() const override { return solution_; }
  bool row_is_affine(Index i) const override { return i < d_; }

  Index features() const { return d_; }
  Index samples() const { return p_; }
  double lambda() const { return lambda_; }
  const DenseMatrix& sample_matrix() const { return a_; }
  const std::vector<double>& labels() const { return y_; }

  /// Attach a reference root (e.g. from a Newton solve) for error tracking.
  void set_known_solution(Vector x) { solution_ = std::move(x); }

  /// Residual of the d linear rows only.
  Vector linear_residual(const Vector& x) const;

 private:
  Vector margins(const Vector& x) const;  // a_i^T w for every sample

  DenseMatrix a_;
  std::vector<double> y_;
  double lambda_;
  Index d_;
  Index p_;
  double coupling_;  // 1 / (lambda p)
  Vector sample_sq_norms_;
  Vector feature_row_sq_norms_;
  std::string label_;
  std::optional<Vector> solution_;
};

/// phi'(t) = -y / (1 + exp(y t)) and phi''(t) = exp(y t) / (1 + exp(y t))^2,
/// evaluated with exponentials of non-positive arguments only.
double logistic_first(double y, double t);
double logistic_second(double y, double t);

/// lambda defaults to 1/p.
GlmProblem make_glm(const Dataset& dataset, std::optional<double> lambda = std::nullopt,
                    std::string label = "glm");

/// Gaussian samples a_i ~ N(0, I_d), hidden w ~ N(0, I_d),
/// y_i = sign(a_i^T w) with each label flipped with probability flip_rate.
Dataset make_synthetic_dataset(Index p, Index d, std::uint64_t seed, double flip_rate = 0.05);

}  // namespace cnk
