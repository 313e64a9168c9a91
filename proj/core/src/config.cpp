#include "cnk/config.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

#include "cnk/error.hpp"

namespace cnk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::AllWeightsZero: return "AllWeightsZero";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidEta: return "InvalidEta";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr std::array<std::pair<MethodKind, std::string_view>, 9> kMethodNames{{
    {MethodKind::NK, "nk"},
    {MethodKind::NURK, "nurk"},
    {MethodKind::NRK, "nrk"},
    {MethodKind::DR_CNK, "dr-cnk"},
    {MethodKind::RD_CNK, "rd-cnk"},
    {MethodKind::DB_CNK, "db-cnk"},
    {MethodKind::RB_CNK, "rb-cnk"},
    {MethodKind::GLM_HYBRID_DB, "glm-hybrid-db"},
    {MethodKind::GLM_HYBRID_RB, "glm-hybrid-rb"},
}};

}  // namespace

std::string_view to_string(MethodKind kind) noexcept {
  for (const auto& [k, name] : kMethodNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

MethodKind parse_method(std::string_view text) {
  std::string lowered;
  for (char c : text) {
    lowered.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (const auto& [k, name] : kMethodNames) {
    if (lowered == name) return k;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + std::string(text) + "'");
}

bool is_block(MethodKind kind) noexcept {
  return kind == MethodKind::DB_CNK || kind == MethodKind::RB_CNK || is_glm_hybrid(kind);
}

bool is_greedy(MethodKind kind) noexcept {
  return kind == MethodKind::DR_CNK || kind == MethodKind::RD_CNK || is_block(kind);
}

bool is_glm_hybrid(MethodKind kind) noexcept {
  return kind == MethodKind::GLM_HYBRID_DB || kind == MethodKind::GLM_HYBRID_RB;
}

bool uses_distance_set(MethodKind kind) noexcept {
  return kind == MethodKind::DR_CNK || kind == MethodKind::DB_CNK ||
         kind == MethodKind::GLM_HYBRID_DB;
}

bool is_randomized(MethodKind kind) noexcept {
  return kind == MethodKind::NURK || kind == MethodKind::NRK || kind == MethodKind::DR_CNK ||
         kind == MethodKind::RD_CNK;
}

void ThresholdMode::validate() const {
  if (!std::isfinite(value)) throw Error(ErrorCode::InvalidConfig, "threshold parameter is not finite");
  if (kind == Kind::Convex && (value < 0.0 || value > 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "theta must lie in [0, 1]");
  }
  if (kind == Kind::Scaled && (value <= 0.0 || value > 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "xi must lie in (0, 1]");
  }
}

std::string ThresholdMode::describe() const {
  std::ostringstream out;
  out << (kind == Kind::Convex ? "theta=" : "xi=") << value;
  return out.str();
}

void SolverConfig::validate() const {
  threshold.validate();
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be at least 1");
}

}  // namespace cnk
