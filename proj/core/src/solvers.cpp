#include "cnk/solvers.hpp"

#include <chrono>
#include <cmath>

#include "cnk/error.hpp"
#include "cnk/linalg.hpp"
#include "cnk/problems/glm.hpp"

namespace cnk {

Vector kaczmarz_step(const Vector& x, double f_i, const Vector& grad_i) {
  const double denom = grad_i.squaredNorm();
  if (!(denom >= kUnderflowGuard)) throw Error(ErrorCode::ZeroGradient, "row gradient vanishes");
  return x - (f_i / denom) * grad_i;
}

Vector block_step(const Vector& x, const DenseMatrix& j_tau, const Vector& f_tau) {
  if (j_tau.rows() == 0) throw Error(ErrorCode::EmptySet, "block_step: empty row set");
  if (j_tau.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "block_step: Jacobian block width != n");
  return x - min_norm_least_squares(j_tau, f_tau);
}

namespace {

Vector gather(const Vector& v, const IndexList& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out[static_cast<Index>(j)] = v[idx[j]];
  return out;
}

Vector block_step_with_residual(const Problem& problem, const Vector& x, const Vector& f,
                                const IndexList& tau) {
  return block_step(x, problem.jacobian_rows(x, tau), gather(f, tau));
}

SelectionResult greedy_set(const RowGeometry& g, Index m, bool distance, const ThresholdMode& mode) {
  if (distance) return build_distance_set(g, compute_epsilon(g, mode));
  return build_residual_set(g, compute_delta(g, m, mode));
}

/// Bookkeeping shared by every driver: records, timing, error tracking and
/// the breakdown exit.
class TraceBuilder {
 public:
  TraceBuilder(const Problem& problem, const SolverConfig& config, const SolveOptions& options)
      : clock_(options.clock ? options.clock : steady_clock()), start_(clock_()) {
    if (config.record_error) solution_ = problem.known_solution();
  }

  IterationRecord& open(std::int64_t k, double residual_sq, const Vector& x) {
    IterationRecord rec;
    rec.k = k;
    rec.residual_sq = residual_sq;
    rec.elapsed = clock_() - start_;
    if (solution_) rec.error_sq = (x - *solution_).squaredNorm();
    trace_.records.push_back(std::move(rec));
    return trace_.records.back();
  }

  SolveTrace finish(SolveStatus status, Vector x, std::int64_t iterations, std::string message = {}) {
    trace_.status = status;
    trace_.final_x = std::move(x);
    trace_.total_iterations = iterations;
    trace_.total_seconds = clock_() - start_;
    trace_.message = std::move(message);
    return std::move(trace_);
  }

 private:
  Clock clock_;
  double start_;
  std::optional<Vector> solution_;
  SolveTrace trace_;
};

struct StepOutcome {
  Vector x;
  IndexList selected;
  std::size_t set_size = 0;
};

}  // namespace

Clock steady_clock() {
  return [] {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
  };
}

Clock null_clock() {
  return [] { return 0.0; };
}

SolveTrace solve(const Problem& problem, const Vector& x0, const SolverConfig& config,
                 const SolveOptions& options) {
  config.validate();
  check_dimension(problem, x0);
  if (is_glm_hybrid(config.method)) {
    const auto* glm = dynamic_cast<const GlmProblem*>(&problem);
    if (glm == nullptr) {
      throw Error(ErrorCode::InvalidConfig, std::string(to_string(config.method)) + " requires a GLM problem");
    }
    return solve_glm_hybrid(*glm, x0, config, options);
  }

  const Index m = problem.rows();
  const MethodKind method = config.method;
  const bool distance = uses_distance_set(method);
  Rng rng(config.seed);
  TraceBuilder builder(problem, config, options);
  Vector x = x0;

  for (std::int64_t k = 0;; ++k) {
    const Vector f = problem.residual(x);
    const double r2 = f.squaredNorm();
    if (!std::isfinite(r2)) {
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, "non-finite residual");
    }
    IterationRecord& rec = builder.open(k, r2, x);
    const StopDecision decision = check_stop(r2, k, config);
    if (decision == StopDecision::Converged) return builder.finish(SolveStatus::Converged, std::move(x), k);
    if (decision == StopDecision::CapReached) {
      return builder.finish(SolveStatus::IterationCapReached, std::move(x), k);
    }

    StepOutcome out;
    std::optional<RowGeometry> geometry;
    std::optional<SelectionResult> selection;
    try {
      switch (method) {
        case MethodKind::NK:
        case MethodKind::NURK:
        case MethodKind::NRK: {
          Index i = 0;
          if (method == MethodKind::NK) {
            i = static_cast<Index>(k % m);
          } else if (method == MethodKind::NURK) {
            i = rng.uniform_index(m);
          } else {
            i = sample_weighted(f.cwiseAbs2(), r2, rng);
          }
          out.x = kaczmarz_step(x, f[i], problem.gradient_row(i, x));
          out.selected = {i};
          out.set_size = 1;
          break;
        }
        case MethodKind::DR_CNK:
        case MethodKind::RD_CNK:
        case MethodKind::DB_CNK:
        case MethodKind::RB_CNK: {
          geometry = RowGeometry::from(f, problem.row_grad_sq_norms(x));
          selection = greedy_set(*geometry, m, distance, config.threshold);
          out.set_size = selection->set.size();
          if (is_block(method)) {
            out.x = block_step_with_residual(problem, x, f, selection->set);
            out.selected = selection->set;
          } else {
            const Index i = sample_index(*selection, rng);
            out.x = kaczmarz_step(x, f[i], problem.gradient_row(i, x));
            out.selected = {i};
          }
          break;
        }
        default:
          throw Error(ErrorCode::InvalidConfig, "unsupported method");
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidConfig) throw;
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, e.what());
    }
    if (!out.x.allFinite()) {
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, "non-finite iterate");
    }

    rec.selected = out.selected;
    rec.set_size = out.set_size;
    if (options.observer) {
      StepEvent ev;
      ev.k = k;
      ev.x_before = &x;
      ev.x_after = &out.x;
      ev.geometry = geometry ? &*geometry : nullptr;
      ev.selection = selection ? &*selection : nullptr;
      ev.selected = &rec.selected;
      options.observer(ev);
    }
    x = std::move(out.x);
  }
}

SolveTrace solve_glm_hybrid(const GlmProblem& glm, const Vector& x0, const SolverConfig& config,
                            const SolveOptions& options) {
  config.validate();
  check_dimension(glm, x0);
  if (!is_glm_hybrid(config.method)) {
    throw Error(ErrorCode::InvalidConfig, "solve_glm_hybrid expects glm-hybrid-db or glm-hybrid-rb");
  }
  const Index d = glm.features();
  const Index p = glm.samples();
  const bool distance = uses_distance_set(config.method);

  IndexList linear_rows(static_cast<std::size_t>(d));
  for (Index j = 0; j < d; ++j) linear_rows[static_cast<std::size_t>(j)] = j;

  TraceBuilder builder(glm, config, options);
  Vector x = x0;

  for (std::int64_t k = 0;; ++k) {
    const Vector f = glm.residual(x);
    const double r2 = f.squaredNorm();
    if (!std::isfinite(r2)) {
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, "non-finite residual");
    }
    IterationRecord& rec = builder.open(k, r2, x);
    const StopDecision decision = check_stop(r2, k, config);
    if (decision == StopDecision::Converged) return builder.finish(SolveStatus::Converged, std::move(x), k);
    if (decision == StopDecision::CapReached) {
      return builder.finish(SolveStatus::IterationCapReached, std::move(x), k);
    }

    Vector x_half;
    Vector x_next;
    IndexList greedy_rows;
    std::optional<RowGeometry> geometry;
    std::optional<SelectionResult> selection;
    try {
      x_half = d > 0 ? block_step_with_residual(glm, x, f, linear_rows) : x;
      const Vector f_half = glm.residual(x_half);
      const Vector g_half = glm.row_grad_sq_norms(x_half);
      geometry = RowGeometry::from(f_half.tail(p), g_half.tail(p));
      if (geometry->residual_sq > 0.0) {
        selection = greedy_set(*geometry, p, distance, config.threshold);
        for (Index i : selection->set) greedy_rows.push_back(d + i);
        x_next = block_step_with_residual(glm, x_half, f_half, greedy_rows);
      } else {
        x_next = x_half;
      }
    } catch (const Error& e) {
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, e.what());
    }
    if (!x_next.allFinite()) {
      return builder.finish(SolveStatus::NumericalBreakdown, std::move(x), k, "non-finite iterate");
    }

    rec.selected = linear_rows;
    rec.selected.insert(rec.selected.end(), greedy_rows.begin(), greedy_rows.end());
    rec.set_size = greedy_rows.size();
    if (options.observer) {
      StepEvent linear;
      linear.k = k;
      linear.sub_step = 0;
      linear.x_before = &x;
      linear.x_after = &x_half;
      linear.selected = &linear_rows;
      options.observer(linear);

      StepEvent greedy;
      greedy.k = k;
      greedy.sub_step = 1;
      greedy.x_before = &x_half;
      greedy.x_after = &x_next;
      greedy.geometry = &*geometry;
      greedy.selection = selection ? &*selection : nullptr;
      greedy.selected = &greedy_rows;
      options.observer(greedy);
    }
    x = std::move(x_next);
  }
}

Vector block_step(const Vector& x, const IndexList& tau, const Problem& problem) {
  check_dimension(problem, x);
  if (tau.empty()) throw Error(ErrorCode::EmptySet, "block_step: empty row set");
  return block_step_with_residual(problem, x, problem.residual(x), tau);
}

}  // namespace cnk
