#include "cnk/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "cnk/error.hpp"
#include "cnk/linalg.hpp"

namespace cnk {

namespace {

constexpr double kDifferenceFloor = 1e-12;
constexpr double kLemmaSlack = 1e-10;

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta < 0.5)) {
    throw Error(ErrorCode::InvalidEta, "eta must lie in [0, 1/2), got " + std::to_string(eta));
  }
}

Vector sample_ball(const Vector& center, double radius, Rng& rng) {
  const Index n = center.size();
  Vector dir = rng.normal_vector(n);
  const double norm = dir.norm();
  if (norm == 0.0) return center;
  const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
  return center + (r / norm) * dir;
}

DenseMatrix rows_of(const DenseMatrix& J, const IndexList& tau) {
  DenseMatrix out(static_cast<Index>(tau.size()), J.cols());
  for (std::size_t r = 0; r < tau.size(); ++r) out.row(static_cast<Index>(r)) = J.row(tau[r]);
  return out;
}

Vector entries_of(const Vector& v, const IndexList& tau) {
  Vector out(static_cast<Index>(tau.size()));
  for (std::size_t r = 0; r < tau.size(); ++r) out[static_cast<Index>(r)] = v[tau[r]];
  return out;
}

bool exceeds(double lhs, double rhs, double scale) {
  return lhs > rhs + kLemmaSlack * std::max(1.0, scale);
}

}  // namespace

EtaEstimate EtaEstimate::uniform(Index m, double eta) {
  EtaEstimate e;
  e.eta_per_row = Vector::Constant(m, eta);
  e.eta = eta;
  return e;
}

EtaEstimate estimate_eta(const Problem& problem, const Vector& center, double radius,
                         std::size_t pairs, Rng& rng) {
  check_dimension(problem, center);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidConfig, "estimate_eta: radius must be positive");
  if (pairs < 1) throw Error(ErrorCode::InvalidConfig, "estimate_eta: need at least one pair");

  const Index m = problem.rows();
  EtaEstimate est;
  est.eta_per_row = Vector::Zero(m);
  est.center = center;
  est.radius = radius;
  std::vector<bool> seen(static_cast<std::size_t>(m), false);

  for (std::size_t s = 0; s < pairs; ++s) {
    const Vector x1 = sample_ball(center, radius, rng);
    const Vector x2 = sample_ball(center, radius, rng);
    const Vector f1 = problem.residual(x1);
    const Vector f2 = problem.residual(x2);
    const Vector step = x1 - x2;
    for (Index i = 0; i < m; ++i) {
      const double diff = f1[i] - f2[i];
      if (!(std::abs(diff) > kDifferenceFloor)) continue;
      seen[static_cast<std::size_t>(i)] = true;
      if (problem.row_is_affine(i)) continue;
      const double defect = diff - problem.gradient_row(i, x1).dot(step);
      est.eta_per_row[i] = std::max(est.eta_per_row[i], std::abs(defect) / std::abs(diff));
    }
  }
  est.sample_count = pairs;
  for (Index i = 0; i < m; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) est.degenerate_rows.push_back(i);
  }
  est.eta = m > 0 ? est.eta_per_row.maxCoeff() : 0.0;
  return est;
}

EtaEstimate estimate_vector_cone_constant(const Problem& problem, const Vector& center, double radius,
                                          std::size_t pairs, Rng& rng) {
  check_dimension(problem, center);
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidConfig, "cone constant: radius must be positive");
  if (pairs < 1) throw Error(ErrorCode::InvalidConfig, "cone constant: need at least one pair");

  double best = 0.0;
  for (std::size_t s = 0; s < pairs; ++s) {
    const Vector x1 = sample_ball(center, radius, rng);
    const Vector x2 = sample_ball(center, radius, rng);
    const Vector diff = problem.residual(x1) - problem.residual(x2);
    const double denom = diff.norm();
    if (!(denom > kDifferenceFloor)) continue;
    const Vector defect = diff - problem.jacobian(x1) * (x1 - x2);
    best = std::max(best, defect.norm() / denom);
  }
  EtaEstimate est = EtaEstimate::uniform(problem.rows(), best);
  est.sample_count = pairs;
  est.center = center;
  est.radius = radius;
  return est;
}

double factor_dr_cnk(double eps_k, double h2, double eta) {
  require_eta(eta);
  return 1.0 - (1.0 - 2.0 * eta) / (1.0 + eta * eta) * eps_k * h2 * h2;
}

double factor_rd_cnk(double delta_k, double h2, double max_grad_sq, double eta) {
  require_eta(eta);
  return 1.0 - (1.0 - 2.0 * eta) / (1.0 + eta * eta) * delta_k * h2 * h2 / max_grad_sq;
}

double factor_nrk(double h2, double fro_sq, Index m, double eta) {
  require_eta(eta);
  const double c = (1.0 - 2.0 * eta) / ((1.0 + eta) * (1.0 + eta));
  return 1.0 - c * h2 * h2 / (fro_sq * static_cast<double>(m));
}

double block_alpha(const DenseMatrix& j_tau, double eta) {
  require_eta(eta);
  const SingularExtremes ext = singular_extremes(pseudoinverse(j_tau));
  return ext.h2 * ext.h2 - 2.0 * eta * ext.sigma_max * ext.sigma_max;
}

std::optional<double> factor_block(double alpha, std::size_t set_size, double threshold,
                                   double h2, double min_grad_sq, double eta) {
  require_eta(eta);
  if (!(alpha > 0.0)) return std::nullopt;
  return 1.0 - alpha * min_grad_sq * static_cast<double>(set_size) * threshold * h2 * h2 /
                   (1.0 + eta * eta);
}

double expected_error_ratio(const Problem& problem, const Vector& x,
                            const SelectionResult& selection, const Vector& x_star) {
  const double base = (x - x_star).squaredNorm();
  if (!(base > 0.0)) return 0.0;
  const Vector f = problem.residual(x);
  const std::vector<double> prob = selection.probabilities();
  double expected = 0.0;
  for (std::size_t j = 0; j < selection.set.size(); ++j) {
    if (prob[j] <= 0.0) continue;
    const Index i = selection.set[j];
    const Vector next = kaczmarz_step(x, f[i], problem.gradient_row(i, x));
    expected += prob[j] * (next - x_star).squaredNorm();
  }
  return expected / base;
}

FactorReport collect_factor_report(const Problem& problem, const Vector& x0,
                                   const SolverConfig& config, double eta) {
  require_eta(eta);
  const MethodKind method = config.method;
  if (!is_greedy(method) || is_glm_hybrid(method)) {
    throw Error(ErrorCode::InvalidConfig, "factor report needs dr-cnk, rd-cnk, db-cnk or rb-cnk");
  }
  FactorReport report;
  report.method = method;
  report.eta = eta;
  report.default_threshold = config.threshold.is_default();
  const auto x_star = problem.known_solution();
  const Index m = problem.rows();

  SolveOptions options;
  options.observer = [&](const StepEvent& ev) {
    const RowGeometry& g = *ev.geometry;
    const SelectionResult& sel = *ev.selection;
    const DenseMatrix J = problem.jacobian(*ev.x_before);

    FactorRecord rec;
    rec.k = ev.k;
    rec.threshold = sel.threshold;
    rec.h2 = singular_extremes(J).h2;
    rec.max_grad_sq = g.grad_sq_norms.maxCoeff();
    rec.min_grad_sq = g.grad_sq_norms.minCoeff();
    rec.fro_sq = g.jac_fro_sq;
    rec.set_size = sel.set.size();
    rec.rho_nrk = factor_nrk(rec.h2, rec.fro_sq, m, eta);

    switch (method) {
      case MethodKind::DR_CNK:
        rec.rho = factor_dr_cnk(sel.threshold, rec.h2, eta);
        break;
      case MethodKind::RD_CNK:
        rec.rho = factor_rd_cnk(sel.threshold, rec.h2, rec.max_grad_sq, eta);
        break;
      case MethodKind::DB_CNK:
        rec.alpha = block_alpha(rows_of(J, sel.set), eta);
        rec.rho = factor_block(*rec.alpha, rec.set_size, sel.threshold, rec.h2, rec.min_grad_sq, eta);
        break;
      case MethodKind::RB_CNK:
        rec.alpha = block_alpha(rows_of(J, sel.set), eta);
        rec.rho = factor_block(*rec.alpha, rec.set_size, sel.threshold, rec.h2, 1.0, eta);
        break;
      default:
        break;
    }
    if (x_star) {
      const double base = (*ev.x_before - *x_star).squaredNorm();
      if (is_block(method)) {
        if (base > 0.0) rec.measured = (*ev.x_after - *x_star).squaredNorm() / base;
      } else {
        rec.measured = expected_error_ratio(problem, *ev.x_before, sel, *x_star);
      }
    }
    report.records.push_back(rec);
  };
  report.trace = solve(problem, x0, config, options);
  return report;
}

LemmaReport check_lemma_inequalities(const Problem& problem,
                                     const std::vector<std::pair<Vector, Vector>>& x_pairs,
                                     const std::vector<IndexList>& tau_sets,
                                     const EtaEstimate& eta) {
  const auto x_star_opt = problem.known_solution();
  if (!x_star_opt) throw Error(ErrorCode::InvalidConfig, "lemma checks need a known solution");
  if (eta.eta_per_row.size() != problem.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "eta estimate does not match the problem rows");
  }
  const Vector& x_star = *x_star_opt;
  LemmaReport report;

  for (const auto& [x1, x2] : x_pairs) {
    check_dimension(problem, x1);
    check_dimension(problem, x2);
    const Vector f1 = problem.residual(x1);
    const Vector f2 = problem.residual(x2);
    const DenseMatrix J1 = problem.jacobian(x1);
    const double err1 = (x1 - x_star).squaredNorm();

    for (const IndexList& tau : tau_sets) {
      if (tau.empty()) continue;
      const DenseMatrix j_tau = rows_of(J1, tau);
      const Vector f_tau = entries_of(f1, tau);

      const double diff_sq = (f_tau - entries_of(f2, tau)).squaredNorm();
      const double lin_sq = (j_tau * (x1 - x2)).squaredNorm() / (1.0 + eta.eta * eta.eta);
      ++report.cone_checks;
      if (exceeds(lin_sq, diff_sq, std::max(diff_sq, lin_sq))) ++report.cone_violations;

      for (Index i : tau) {
        const double g2 = J1.row(i).squaredNorm();
        if (!(g2 >= kUnderflowGuard)) continue;
        const Vector next = kaczmarz_step(x1, f1[i], J1.row(i).transpose());
        const double bound = err1 - (1.0 - 2.0 * eta.eta_per_row[i]) * f1[i] * f1[i] / g2;
        ++report.single_step_checks;
        if (exceeds((next - x_star).squaredNorm(), bound, err1)) ++report.single_step_violations;
      }

      const Vector next = block_step(x1, j_tau, f_tau);
      const SingularExtremes ext = singular_extremes(pseudoinverse(j_tau));
      const double a = ext.h2 * ext.h2 - 2.0 * eta.eta * ext.sigma_max * ext.sigma_max;
      const double bound = err1 - a * f_tau.squaredNorm();
      ++report.block_checks;
      if (exceeds((next - x_star).squaredNorm(), bound, err1)) ++report.block_violations;
    }
  }
  return report;
}

}  // namespace cnk
