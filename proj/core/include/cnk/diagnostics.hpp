#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnk/problem.hpp"
#include "cnk/rng.hpp"
#include "cnk/selection.hpp"
#include "cnk/solvers.hpp"

namespace cnk {

/// Empirical tangential-cone constants over a ball.
///
/// For each row, the supremum over sampled pairs (x1, x2) of
///   |f_i(x1) - f_i(x2) - grad f_i(x1)^T (x1 - x2)| / |f_i(x1) - f_i(x2)|,
/// skipping pairs with |f_i(x1) - f_i(x2)| <= 1e-12. These are lower bounds
/// of the true suprema over the ball.
struct EtaEstimate {
  Vector eta_per_row;
  double eta = 0.0;
  std::size_t sample_count = 0;
  Vector center;
  double radius = 0.0;
  std::vector<Index> degenerate_rows;  // rows that never produced a valid ratio

  /// Constant per-row value, e.g. for negative controls.
  static EtaEstimate uniform(Index m, double eta);
};

/// Draws `pairs` point pairs uniformly from the ball. Throws InvalidConfig
/// unless radius > 0 and pairs >= 1.
EtaEstimate estimate_eta(const Problem& problem, const Vector& center, double radius,
                         std::size_t pairs, Rng& rng);

/// Vector form of the cone condition over the same kind of ball:
///   sup ||f(x1) - f(x2) - f'(x1)(x1 - x2)|| / ||f(x1) - f(x2)||,
/// reported uniformly on every row. Bounded near a regular root, unlike the
/// row-wise ratio, which blows up on pairs sharing a level set of a curved row.
EtaEstimate estimate_vector_cone_constant(const Problem& problem, const Vector& center, double radius,
                                          std::size_t pairs, Rng& rng);

/// 1 - (1-2eta)/(1+eta^2) * eps_k * h2^2.
double factor_dr_cnk(double eps_k, double h2, double eta);
/// 1 - (1-2eta)/(1+eta^2) * delta_k * h2^2 / max_grad_sq.
double factor_rd_cnk(double delta_k, double h2, double max_grad_sq, double eta);
/// 1 - (1-2eta)/(1+eta)^2 * h2^2 / (fro_sq * m); shared by NRK and NURK.
double factor_nrk(double h2, double fro_sq, Index m, double eta);

/// h2^2(J^+) - 2 eta sigma_max^2(J^+) for the realized block J = f'_tau(x_k).
double block_alpha(const DenseMatrix& j_tau, double eta);

/// One-step block factor
///   1 - alpha * min_grad_sq * |tau| * threshold * h2^2 / (1 + eta^2).
/// For the residual-set variant pass min_grad_sq = 1. Returns nullopt when
/// alpha <= 0: the bound does not apply at that state.
std::optional<double> factor_block(double alpha, std::size_t set_size, double threshold,
                                   double h2, double min_grad_sq, double eta);

/// Exact conditional mean of ||x_{k+1} - x*||^2 / ||x_k - x*||^2 over the
/// selection distribution of a single-sample greedy step.
double expected_error_ratio(const Problem& problem, const Vector& x,
                            const SelectionResult& selection, const Vector& x_star);

struct FactorRecord {
  std::int64_t k = 0;
  double threshold = 0.0;  // eps_k or delta_k
  double h2 = 0.0;         // h2(f'(x_k))
  double max_grad_sq = 0.0;
  double min_grad_sq = 0.0;
  double fro_sq = 0.0;
  std::size_t set_size = 0;
  std::optional<double> alpha;      // block methods only
  std::optional<double> rho;        // factor of the active method; unset if the hypothesis fails
  double rho_nrk = 0.0;
  std::optional<double> measured;   // block: realized error ratio; single: conditional mean
};

struct FactorReport {
  MethodKind method = MethodKind::DR_CNK;
  double eta = 0.0;
  bool default_threshold = true;    // false flags factors computed from a relaxed eps/delta
  std::vector<FactorRecord> records;
  SolveTrace trace;
};

/// Solves with an observer that evaluates the factor expressions at every
/// iteration. Requires a greedy single-sample or block method and eta < 1/2.
FactorReport collect_factor_report(const Problem& problem, const Vector& x0,
                                   const SolverConfig& config, double eta);

struct LemmaReport {
  std::size_t single_step_checks = 0;
  std::size_t single_step_violations = 0;
  std::size_t cone_checks = 0;
  std::size_t cone_violations = 0;
  std::size_t block_checks = 0;
  std::size_t block_violations = 0;

  std::size_t violations() const {
    return single_step_violations + cone_violations + block_violations;
  }
};

/// Evaluates both sides of the three projection inequalities:
///  - single step on each row i in tau from x1:
///      ||x' - x*||^2 <= ||x1 - x*||^2 - (1 - 2 eta_i) |f_i|^2 / ||g_i||^2
///  - cone bound on (x1, x2, tau):
///      ||f_tau(x1) - f_tau(x2)||^2 >= ||f'_tau(x1)(x1 - x2)||^2 / (1 + eta^2)
///  - block step on tau from x1:
///      ||x' - x*||^2 <= ||x1 - x*||^2 - (h2^2(J^+) - 2 eta sigma_max^2(J^+)) ||f_tau||^2
/// A relative slack of 1e-10 absorbs rounding. Requires a known solution.
LemmaReport check_lemma_inequalities(const Problem& problem,
                                     const std::vector<std::pair<Vector, Vector>>& x_pairs,
                                     const std::vector<IndexList>& tau_sets,
                                     const EtaEstimate& eta);

}  // namespace cnk
