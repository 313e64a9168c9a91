#include "cnk/problems/glm.hpp"

#include <cmath>

#include "cnk/error.hpp"
#include "cnk/rng.hpp"

namespace cnk {

double logistic_first(double y, double t) {
  const double s = y * t;
  if (s >= 0.0) {
    const double e = std::exp(-s);
    return -y * e / (1.0 + e);
  }
  return -y / (1.0 + std::exp(s));
}

double logistic_second(double y, double t) {
  const double e = std::exp(-std::abs(y * t));
  const double denom = 1.0 + e;
  return e / (denom * denom);
}

GlmProblem::GlmProblem(DenseMatrix samples, std::vector<double> labels, double lambda, std::string label)
    : a_(std::move(samples)),
      y_(std::move(labels)),
      lambda_(lambda),
      d_(a_.rows()),
      p_(a_.cols()),
      label_(std::move(label)) {
  if (p_ < 1) throw Error(ErrorCode::DimensionMismatch, "GLM needs at least one sample");
  if (static_cast<Index>(y_.size()) != p_) throw Error(ErrorCode::DimensionMismatch, "label count != sample count");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw Error(ErrorCode::InvalidConfig, "lambda must be positive");
  for (double y : y_) {
    if (y != 1.0 && y != -1.0) throw Error(ErrorCode::InvalidConfig, "GLM labels must be -1 or +1");
  }
  coupling_ = 1.0 / (lambda_ * static_cast<double>(p_));
  sample_sq_norms_ = a_.colwise().squaredNorm().transpose();
  feature_row_sq_norms_ = a_.rowwise().squaredNorm();
}

Vector GlmProblem::margins(const Vector& x) const { return a_.transpose() * x.tail(d_); }

Vector GlmProblem::linear_residual(const Vector& x) const {
  check_dimension(*this, x);
  return coupling_ * (a_ * x.head(p_)) - x.tail(d_);
}

Vector GlmProblem::residual(const Vector& x) const {
  check_dimension(*this, x);
  Vector f(p_ + d_);
  f.head(d_) = coupling_ * (a_ * x.head(p_)) - x.tail(d_);
  const Vector t = margins(x);
  for (Index i = 0; i < p_; ++i) f[d_ + i] = x[i] + logistic_first(y_[static_cast<std::size_t>(i)], t[i]);
  return f;
}

Vector GlmProblem::gradient_row(Index i, const Vector& x) const {
  check_dimension(*this, x);
  if (i < 0 || i >= p_ + d_) throw Error(ErrorCode::DimensionMismatch, "GLM row index out of range");
  Vector g = Vector::Zero(p_ + d_);
  if (i < d_) {
    g.head(p_) = coupling_ * a_.row(i).transpose();
    g[p_ + i] = -1.0;
    return g;
  }
  const Index s = i - d_;
  const double t = a_.col(s).dot(x.tail(d_));
  g[s] = 1.0;
  g.tail(d_) = logistic_second(y_[static_cast<std::size_t>(s)], t) * a_.col(s);
  return g;
}

Vector GlmProblem::row_grad_sq_norms(const Vector& x) const {
  check_dimension(*this, x);
  Vector out(p_ + d_);
  out.head(d_) = coupling_ * coupling_ * feature_row_sq_norms_.array() + 1.0;
  const Vector t = margins(x);
  for (Index i = 0; i < p_; ++i) {
    const double c = logistic_second(y_[static_cast<std::size_t>(i)], t[i]);
    out[d_ + i] = 1.0 + c * c * sample_sq_norms_[i];
  }
  return out;
}

DenseMatrix GlmProblem::jacobian_rows(const Vector& x, const IndexList& rows) const {
  check_dimension(*this, x);
  DenseMatrix J = DenseMatrix::Zero(static_cast<Index>(rows.size()), p_ + d_);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Index i = rows[r];
    const auto row = static_cast<Index>(r);
    if (i < 0 || i >= p_ + d_) throw Error(ErrorCode::DimensionMismatch, "GLM row index out of range");
    if (i < d_) {
      J.row(row).head(p_) = coupling_ * a_.row(i);
      J(row, p_ + i) = -1.0;
    } else {
      const Index s = i - d_;
      const double t = a_.col(s).dot(x.tail(d_));
      J(row, s) = 1.0;
      J.row(row).tail(d_) = logistic_second(y_[static_cast<std::size_t>(s)], t) * a_.col(s).transpose();
    }
  }
  return J;
}

GlmProblem make_glm(const Dataset& dataset, std::optional<double> lambda, std::string label) {
  if (dataset.p < 1) throw Error(ErrorCode::DimensionMismatch, "dataset has no samples");
  const double lam = lambda.value_or(1.0 / static_cast<double>(dataset.p));
  return GlmProblem(dataset.dense_samples(), dataset.labels, lam, std::move(label));
}

Dataset make_synthetic_dataset(Index p, Index d, std::uint64_t seed, double flip_rate) {
  if (p < 1 || d < 1) throw Error(ErrorCode::DimensionMismatch, "synthetic dataset needs p, d >= 1");
  Rng rng(seed);
  const Vector hidden = rng.normal_vector(d);
  Dataset ds;
  ds.d = d;
  ds.p = p;
  ds.entries.reserve(static_cast<std::size_t>(p * d));
  ds.labels.reserve(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) {
    const Vector a = rng.normal_vector(d);
    double y = a.dot(hidden) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < flip_rate) y = -y;
    for (Index j = 0; j < d; ++j) ds.entries.push_back({i, j + 1, a[j]});
    ds.labels.push_back(y);
  }
  return ds;
}

}  // namespace cnk
