#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnk/config.hpp"
#include "cnk/types.hpp"

namespace cnk {

enum class StopDecision { Continue, Converged, CapReached };

/// Converged iff residual_sq < tol (strict); CapReached iff k >= max_iter
/// and not converged.
StopDecision check_stop(double residual_sq, std::int64_t k, const SolverConfig& config) noexcept;

struct IterationRecord {
  std::int64_t k = 0;
  double residual_sq = 0.0;
  IndexList selected;          // rows used to produce x_{k+1}; empty on the final record
  std::size_t set_size = 0;    // |U_k| or |I_k| for greedy methods, else selected.size()
  double elapsed = 0.0;        // seconds since solve start
  std::optional<double> error_sq;
};

enum class SolveStatus { Converged, IterationCapReached, NumericalBreakdown };

std::string_view to_string(SolveStatus status) noexcept;

struct SolveTrace {
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::IterationCapReached;
  Vector final_x;
  std::int64_t total_iterations = 0;
  double total_seconds = 0.0;
  std::string message;  // breakdown reason, empty otherwise

  double final_residual_sq() const { return records.empty() ? 0.0 : records.back().residual_sq; }
};

}  // namespace cnk
