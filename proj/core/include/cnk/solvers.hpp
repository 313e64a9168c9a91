#pragma once

#include <cstdint>
#include <functional>

#include "cnk/config.hpp"
#include "cnk/problem.hpp"
#include "cnk/selection.hpp"
#include "cnk/trace.hpp"

namespace cnk {

class GlmProblem;

/// Projection of x onto { z : f_i + grad_i^T (z - x) = 0 }.
/// Throws ZeroGradient when ||grad_i||^2 < 1e-300.
Vector kaczmarz_step(const Vector& x, double f_i, const Vector& grad_i);

/// x - J_tau^+ f_tau with the minimum-norm least-squares action.
Vector block_step(const Vector& x, const DenseMatrix& j_tau, const Vector& f_tau);

/// Evaluates f and the Jacobian rows of tau at x, then applies the block update.
Vector block_step(const Vector& x, const IndexList& tau, const Problem& problem);

/// What a solver did between x_k and x_{k+1}. Greedy methods fill geometry
/// and selection; the GLM hybrid reports sub_step 0 (linear block) and 1
/// (greedy block) under the same k; in sub_step 1 geometry and selection
/// index the p logistic rows from zero while `selected` holds global rows.
struct StepEvent {
  std::int64_t k = 0;
  int sub_step = 0;
  const Vector* x_before = nullptr;
  const Vector* x_after = nullptr;
  const RowGeometry* geometry = nullptr;
  const SelectionResult* selection = nullptr;
  const IndexList* selected = nullptr;
};

using StepObserver = std::function<void(const StepEvent&)>;

/// Monotonic seconds from an arbitrary origin.
using Clock = std::function<double()>;

Clock steady_clock();
/// Always returns 0; makes traces byte-reproducible.
Clock null_clock();

struct SolveOptions {
  StepObserver observer;
  Clock clock;  // steady_clock() when empty
};

/// Runs config.method from x0 until check_stop says otherwise.
///
/// Never throws for numerical trouble: a vanishing denominator, a failed
/// factorization or a non-finite residual ends the solve with status
/// NumericalBreakdown. Invalid configuration or dimensions throw.
SolveTrace solve(const Problem& problem, const Vector& x0, const SolverConfig& config,
                 const SolveOptions& options = {});

/// Block scheme for the GLM system: each iteration first applies the
/// minimum-norm step on the d linear rows, then a greedy capped block step on
/// the p logistic rows (distance set for GLM_HYBRID_DB, residual set for
/// GLM_HYBRID_RB), both recorded under one iteration index.
SolveTrace solve_glm_hybrid(const GlmProblem& glm, const Vector& x0, const SolverConfig& config,
                            const SolveOptions& options = {});

}  // namespace cnk
