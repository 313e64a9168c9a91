#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnk/config.hpp"
#include "cnk/diagnostics.hpp"
#include "cnk/problem.hpp"
#include "cnk/trace.hpp"

namespace cnk::bench {

/// Parsed --problem selector.
///   brown:N
///   linear:M,N          identity fixture (M == N), b = (1, ..., N)
///   linear:M,N,SEED     consistent Gaussian system
///   glm:synthetic:P,D,SEED
///   glm:PATH            LIBSVM file, lambda = 1/p
struct ProblemSelector {
  enum class Kind { Brown, LinearIdentity, LinearGaussian, GlmSynthetic, GlmFile };

  Kind kind = Kind::Brown;
  Index m = 0;
  Index n = 0;
  std::uint64_t seed = 0;
  std::filesystem::path path;
  std::string text;

  /// Filesystem-safe name used in trace file names, e.g. "brown50".
  std::string label() const;
};

ProblemSelector parse_problem_selector(std::string_view text);

struct ProblemSetup {
  std::unique_ptr<Problem> problem;
  Vector x0;
};

/// Builds the problem and its standard starting point (0.5*ones for Brown,
/// zero otherwise).
ProblemSetup build_problem(const ProblemSelector& selector);

struct BenchSpec {
  std::string problem;
  std::vector<MethodKind> methods;
  int runs = 10;
  std::uint64_t base_seed = 0;
  ThresholdMode threshold = ThresholdMode::convex(0.5);
  double tol = 1e-6;
  std::int64_t max_iter = 200000;
  std::filesystem::path out_dir;  // empty: no files
  bool track_error = false;
  bool diagnostics = false;
  double eta_radius = 0.05;
  std::size_t eta_pairs = 2000;
  int jobs = 1;
  bool zero_time = false;  // elapsed columns written as 0 for byte-stable output

  /// Throws InvalidConfig on an empty method list, runs < 1, jobs < 1 or an
  /// invalid solver setting.
  void validate() const;
};

struct RunResult {
  int run = 0;
  std::uint64_t seed = 0;
  SolveTrace trace;
};

struct MethodSummary {
  MethodKind method = MethodKind::NRK;
  int runs = 0;
  std::int64_t iteration_sum = 0;
  double mean_iterations = 0.0;
  double mean_seconds = 0.0;
  int converged = 0;
  int cap_reached = 0;
  int breakdown = 0;
  std::size_t first_set_size = 0;  // |U_0| or |I_0| of run 0
  bool zero_variance = false;
  std::vector<std::int64_t> iterations;
  std::vector<double> seconds;
};

struct DiagnosticsResult {
  MethodKind method = MethodKind::DR_CNK;
  EtaEstimate eta;
  double eta_rowwise = 0.0;          // row-wise estimate, always computed
  std::string eta_source = "row";    // "row" or "vector" (cone-constant fallback)
  std::optional<FactorReport> report;  // unset when eta >= 1/2
  std::string note;
};

struct BenchReport {
  BenchSpec spec;
  std::string problem_label;
  std::string problem_name;
  Index rows = 0;
  Index cols = 0;
  bool has_solution = false;
  std::vector<MethodSummary> summaries;
  std::vector<std::vector<RunResult>> runs;  // aligned with summaries
  std::vector<DiagnosticsResult> diagnostics;

  bool any_breakdown() const;
};

/// Runs every (method, run) cell with seeds base_seed + run. Cells are
/// independent; with jobs > 1 they are spread across threads.
BenchReport run_bench(const BenchSpec& spec);

/// Aligned plain-text summary table.
std::string emit_table(const BenchReport& report);
std::string emit_json(const BenchReport& report);

/// Columns k,residual_sq,elapsed_s,selected_size[,error_sq]; numbers with 17
/// significant digits; LF endings.
std::string emit_csv(const SolveTrace& trace, bool with_error);

std::string emit_diagnostics_csv(const FactorReport& report);

struct CsvRow {
  std::int64_t k = 0;
  double residual_sq = 0.0;
  double elapsed_s = 0.0;
  std::size_t selected_size = 0;
  std::optional<double> error_sq;
};

/// Reads back what emit_csv writes.
std::vector<CsvRow> parse_trace_csv(std::string_view text);

std::string trace_file_name(const BenchReport& report, MethodKind method, int run);

/// Writes summary.json, summary.txt, trace_<problem>_<method>_<run>.csv and,
/// when diagnostics ran, diagnostics_<problem>_<method>.csv. Throws IoError.
void write_report(const BenchReport& report, const std::filesystem::path& out_dir);

}  // namespace cnk::bench
