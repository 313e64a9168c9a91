#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cnk {

enum class MethodKind {
  NK,    // cyclic
  NURK,  // uniform
  NRK,   // residual-proportional
  DR_CNK,
  RD_CNK,
  DB_CNK,
  RB_CNK,
  GLM_HYBRID_DB,
  GLM_HYBRID_RB,
};

/// Lower-case CLI spelling, e.g. "dr-cnk", "glm-hybrid-db".
std::string_view to_string(MethodKind kind) noexcept;
MethodKind parse_method(std::string_view text);

bool is_block(MethodKind kind) noexcept;
bool is_greedy(MethodKind kind) noexcept;
bool is_glm_hybrid(MethodKind kind) noexcept;
/// True for the distance-rule family (DR-CNK, DB-CNK, GLM-HYBRID-DB).
bool uses_distance_set(MethodKind kind) noexcept;
bool is_randomized(MethodKind kind) noexcept;

/// Greedy threshold family.
///
/// Convex(theta) blends the greedy maximum with the average term,
/// Scaled(xi) keeps only the scaled maximum.
struct ThresholdMode {
  enum class Kind { Convex, Scaled };

  Kind kind = Kind::Convex;
  double value = 0.5;

  static ThresholdMode convex(double theta) { return {Kind::Convex, theta}; }
  static ThresholdMode scaled(double xi) { return {Kind::Scaled, xi}; }

  /// Throws InvalidConfig when theta is outside [0,1] or xi outside (0,1].
  void validate() const;
  bool is_default() const noexcept { return kind == Kind::Convex && value == 0.5; }
  std::string describe() const;
};

struct SolverConfig {
  MethodKind method = MethodKind::DR_CNK;
  ThresholdMode threshold = ThresholdMode::convex(0.5);
  double tol = 1e-6;              // on ||f(x_k)||_2^2
  std::int64_t max_iter = 200000;
  std::uint64_t seed = 0;
  bool record_error = false;      // track ||x_k - x*||^2 when x* is known

  void validate() const;
};

}  // namespace cnk
