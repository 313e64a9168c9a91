#pragma once

#include <vector>

#include "cnk/config.hpp"
#include "cnk/rng.hpp"
#include "cnk/types.hpp"

namespace cnk {

/// Rows whose squared gradient norm is below this are always treated as zero.
inline constexpr double kUnderflowGuard = 1e-300;

/// Per-iterate row quantities that drive the greedy thresholds.
///
/// A row is active when its squared gradient norm is not negligible:
/// grad_sq_norms[i] > max(kUnderflowGuard, eps_mach * jac_fro_sq). A smaller
/// row vanishes in the rounding of ||f'||_F^2 and its distance ratio is
/// meaningless. active_residual_sq is ||f||^2 summed over active rows only; it
/// equals residual_sq whenever every row is active.
struct RowGeometry {
  Vector residual;
  Vector grad_sq_norms;
  double residual_sq = 0.0;
  double active_residual_sq = 0.0;
  double jac_fro_sq = 0.0;
  IndexList active;

  static RowGeometry from(Vector residual, Vector grad_sq_norms);

  /// Geometry of the sub-system made of rows [first, first + count).
  RowGeometry restricted(Index first, Index count) const;

  Index rows() const { return residual.size(); }
  bool is_active(Index i) const;
};

struct SelectionResult {
  enum class Kind { Distance, Residual };

  IndexList set;
  double threshold = 0.0;
  std::vector<double> weights;  // aligned with set
  Kind kind = Kind::Distance;

  double weight_sum() const;
  /// weights / sum(weights).
  std::vector<double> probabilities() const;
};

/// Distance-rule threshold epsilon_k.
/// Convex(theta): theta * max_i(|f_i|^2/||g_i||^2) / ||f||^2 + (1 - theta) / ||f'||_F^2.
/// Scaled(xi):    xi * max_i(|f_i|^2/||g_i||^2) / ||f||^2.
/// The max and ||f||^2 run over active rows.
double compute_epsilon(const RowGeometry& g, const ThresholdMode& mode);

/// U_k = { i active : |f_i|^2 >= eps * ||f||^2 * ||g_i||^2 }, weights |f_i|^2.
SelectionResult build_distance_set(const RowGeometry& g, double eps);

/// Residual-rule threshold delta_k.
/// Convex(theta): theta * max_i |f_i|^2 / ||f||^2 + (1 - theta) / m.
/// Scaled(xi):    xi * max_i |f_i|^2 / ||f||^2.
double compute_delta(const RowGeometry& g, Index m, const ThresholdMode& mode);

/// I_k = { i : |f_i|^2 >= delta * ||f||^2 }, weights |f_i|^2 / ||g_i||^2
/// (zero for inactive rows).
SelectionResult build_residual_set(const RowGeometry& g, double delta);

/// Draws one member of sel.set with probability weight / sum(weight), by
/// cumulative-sum inversion of a single uniform variate.
Index sample_index(const SelectionResult& sel, Rng& rng);

/// Cumulative-sum inversion over an arbitrary nonnegative weight vector.
Index sample_weighted(const Vector& weights, double total, Rng& rng);

}  // namespace cnk
