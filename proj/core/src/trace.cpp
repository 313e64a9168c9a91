#include "cnk/trace.hpp"

namespace cnk {

StopDecision check_stop(double residual_sq, std::int64_t k, const SolverConfig& config) noexcept {
  if (residual_sq < config.tol) return StopDecision::Converged;
  if (k >= config.max_iter) return StopDecision::CapReached;
  return StopDecision::Continue;
}

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCapReached: return "cap_reached";
    case SolveStatus::NumericalBreakdown: return "breakdown";
  }
  return "unknown";
}

}  // namespace cnk
