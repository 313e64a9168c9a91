#include "cnk/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cnk/error.hpp"

namespace cnk {

namespace {

double negligible_row_level(double jac_fro_sq) {
  return std::max(kUnderflowGuard, std::numeric_limits<double>::epsilon() * jac_fro_sq);
}

void require_positive_residual(const RowGeometry& g, const char* who) {
  if (!(g.residual_sq > 0.0)) {
    throw Error(ErrorCode::DegenerateState, std::string(who) + ": residual is zero");
  }
}

double max_distance_ratio(const RowGeometry& g) {
  double best = 0.0;
  for (Index i : g.active) {
    best = std::max(best, g.residual[i] * g.residual[i] / g.grad_sq_norms[i]);
  }
  return best;
}

}  // namespace

RowGeometry RowGeometry::from(Vector residual, Vector grad_sq_norms) {
  if (residual.size() != grad_sq_norms.size()) {
    throw Error(ErrorCode::DimensionMismatch, "RowGeometry: residual and gradient norms differ in length");
  }
  RowGeometry g;
  g.residual = std::move(residual);
  g.grad_sq_norms = std::move(grad_sq_norms);
  g.residual_sq = g.residual.squaredNorm();
  g.jac_fro_sq = g.grad_sq_norms.sum();
  const double level = negligible_row_level(g.jac_fro_sq);
  g.active.reserve(static_cast<std::size_t>(g.residual.size()));
  for (Index i = 0; i < g.residual.size(); ++i) {
    if (g.grad_sq_norms[i] > level) {
      g.active.push_back(i);
      g.active_residual_sq += g.residual[i] * g.residual[i];
    }
  }
  return g;
}

RowGeometry RowGeometry::restricted(Index first, Index count) const {
  return from(residual.segment(first, count), grad_sq_norms.segment(first, count));
}

bool RowGeometry::is_active(Index i) const {
  return std::binary_search(active.begin(), active.end(), i);
}

double SelectionResult::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> SelectionResult::probabilities() const {
  const double total = weight_sum();
  if (!(total > 0.0)) throw Error(ErrorCode::AllWeightsZero, "selection weights sum to zero");
  std::vector<double> p(weights.size());
  for (std::size_t j = 0; j < weights.size(); ++j) p[j] = weights[j] / total;
  return p;
}

double compute_epsilon(const RowGeometry& g, const ThresholdMode& mode) {
  require_positive_residual(g, "compute_epsilon");
  if (g.active.empty()) throw Error(ErrorCode::DegenerateState, "compute_epsilon: every row gradient vanishes");
  if (!(g.active_residual_sq > 0.0)) {
    throw Error(ErrorCode::DegenerateState, "compute_epsilon: residual vanishes on rows with nonzero gradient");
  }
  const double greedy = max_distance_ratio(g) / g.active_residual_sq;
  if (mode.kind == ThresholdMode::Kind::Scaled) return mode.value * greedy;
  return mode.value * greedy + (1.0 - mode.value) / g.jac_fro_sq;
}

SelectionResult build_distance_set(const RowGeometry& g, double eps) {
  SelectionResult sel;
  sel.kind = SelectionResult::Kind::Distance;
  sel.threshold = eps;
  // eps * ||f||^2 <= max ratio exactly; the cap stops rounding from dropping ties
  const double cut = std::min(eps * g.active_residual_sq, max_distance_ratio(g));
  for (Index i : g.active) {
    const double r2 = g.residual[i] * g.residual[i];
    if (r2 / g.grad_sq_norms[i] >= cut) {
      sel.set.push_back(i);
      sel.weights.push_back(r2);
    }
  }
  if (sel.set.empty()) throw Error(ErrorCode::EmptySet, "distance set is empty");
  return sel;
}

double compute_delta(const RowGeometry& g, Index m, const ThresholdMode& mode) {
  require_positive_residual(g, "compute_delta");
  if (m < 1) throw Error(ErrorCode::DimensionMismatch, "compute_delta: m must be positive");
  const double greedy = g.residual.cwiseAbs2().maxCoeff() / g.residual_sq;
  if (mode.kind == ThresholdMode::Kind::Scaled) return mode.value * greedy;
  return mode.value * greedy + (1.0 - mode.value) / static_cast<double>(m);
}

SelectionResult build_residual_set(const RowGeometry& g, double delta) {
  SelectionResult sel;
  sel.kind = SelectionResult::Kind::Residual;
  sel.threshold = delta;
  const double cut = std::min(delta * g.residual_sq, g.residual.cwiseAbs2().maxCoeff());
  for (Index i = 0; i < g.rows(); ++i) {
    const double r2 = g.residual[i] * g.residual[i];
    if (r2 >= cut) {
      sel.set.push_back(i);
      sel.weights.push_back(g.is_active(i) ? r2 / g.grad_sq_norms[i] : 0.0);
    }
  }
  if (sel.set.empty()) throw Error(ErrorCode::EmptySet, "residual set is empty");
  if (!(sel.weight_sum() > 0.0)) {
    throw Error(ErrorCode::AllWeightsZero, "every row in the residual set has a vanishing gradient");
  }
  return sel;
}

Index sample_index(const SelectionResult& sel, Rng& rng) {
  const double total = sel.weight_sum();
  if (!(total > 0.0) || sel.set.empty()) throw Error(ErrorCode::AllWeightsZero, "cannot sample from zero weights");
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < sel.set.size(); ++j) {
    if (sel.weights[j] <= 0.0) continue;
    acc += sel.weights[j];
    last_positive = j;
    if (target < acc) return sel.set[j];
  }
  // target fell past the accumulated sum through rounding
  return sel.set[last_positive];
}

Index sample_weighted(const Vector& weights, double total, Rng& rng) {
  if (!(total > 0.0) || weights.size() == 0) throw Error(ErrorCode::AllWeightsZero, "cannot sample from zero weights");
  const double target = rng.uniform() * total;
  double acc = 0.0;
  Index last_positive = 0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace cnk
