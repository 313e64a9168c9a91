#include "cnk/bench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cnk/error.hpp"
#include "cnk/problems/brown.hpp"
#include "cnk/problems/glm.hpp"
#include "cnk/problems/libsvm.hpp"
#include "cnk/problems/linear.hpp"
#include "cnk/rng.hpp"
#include "cnk/solvers.hpp"

namespace cnk::bench {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidConfig, "bad " + std::string(what) + " '" + text + "'");
  }
  return value;
}

Index parse_dimension(const std::string& text, std::string_view what) {
  const auto v = parse_number<long long>(text, what);
  if (v < 1) throw Error(ErrorCode::InvalidConfig, std::string(what) + " must be positive");
  return static_cast<Index>(v);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string ProblemSelector::label() const {
  switch (kind) {
    case Kind::Brown: return "brown" + std::to_string(n);
    case Kind::LinearIdentity: return "linear" + std::to_string(m) + "x" + std::to_string(n);
    case Kind::LinearGaussian:
      return "linear" + std::to_string(m) + "x" + std::to_string(n) + "s" + std::to_string(seed);
    case Kind::GlmSynthetic:
      return "glmsynth_p" + std::to_string(m) + "_d" + std::to_string(n) + "_s" + std::to_string(seed);
    case Kind::GlmFile: {
      std::string stem = path.filename().string();
      for (char& c : stem) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
      }
      return "glm_" + stem;
    }
  }
  return "problem";
}

ProblemSelector parse_problem_selector(std::string_view text) {
  ProblemSelector sel;
  sel.text = std::string(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig, "problem selector needs a ':' (e.g. brown:50)");
  }
  const std::string_view family = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);

  if (family == "brown") {
    sel.kind = ProblemSelector::Kind::Brown;
    sel.n = parse_dimension(std::string(rest), "Brown dimension");
    sel.m = sel.n;
    return sel;
  }
  if (family == "linear") {
    const auto parts = split(rest, ',');
    if (parts.size() != 2 && parts.size() != 3) {
      throw Error(ErrorCode::InvalidConfig, "linear selector is linear:M,N or linear:M,N,SEED");
    }
    sel.m = parse_dimension(parts[0], "row count");
    sel.n = parse_dimension(parts[1], "column count");
    if (parts.size() == 3) {
      sel.kind = ProblemSelector::Kind::LinearGaussian;
      sel.seed = parse_number<std::uint64_t>(parts[2], "seed");
    } else {
      sel.kind = ProblemSelector::Kind::LinearIdentity;
      if (sel.m != sel.n) throw Error(ErrorCode::InvalidConfig, "identity fixture needs M == N");
    }
    return sel;
  }
  if (family == "glm") {
    constexpr std::string_view kSynthetic = "synthetic:";
    if (rest.substr(0, kSynthetic.size()) == kSynthetic) {
      const auto parts = split(rest.substr(kSynthetic.size()), ',');
      if (parts.size() != 3) throw Error(ErrorCode::InvalidConfig, "glm:synthetic:P,D,SEED expected");
      sel.kind = ProblemSelector::Kind::GlmSynthetic;
      sel.m = parse_dimension(parts[0], "sample count");
      sel.n = parse_dimension(parts[1], "feature count");
      sel.seed = parse_number<std::uint64_t>(parts[2], "seed");
      return sel;
    }
    if (rest.empty()) throw Error(ErrorCode::InvalidConfig, "glm selector needs a dataset path");
    sel.kind = ProblemSelector::Kind::GlmFile;
    sel.path = std::filesystem::path(std::string(rest));
    return sel;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown problem family '" + std::string(family) + "'");
}

ProblemSetup build_problem(const ProblemSelector& selector) {
  ProblemSetup setup;
  switch (selector.kind) {
    case ProblemSelector::Kind::Brown: {
      auto brown = std::make_unique<BrownProblem>(selector.n);
      setup.x0 = brown->default_start();
      setup.problem = std::move(brown);
      break;
    }
    case ProblemSelector::Kind::LinearIdentity: {
      Vector xs = Vector::LinSpaced(selector.n, 1.0, static_cast<double>(selector.n));
      setup.problem = std::make_unique<LinearProblem>(DenseMatrix::Identity(selector.m, selector.n), xs, xs);
      setup.x0 = Vector::Zero(selector.n);
      break;
    }
    case ProblemSelector::Kind::LinearGaussian:
      setup.problem = std::make_unique<LinearProblem>(
          make_random_consistent_linear(selector.m, selector.n, selector.seed));
      setup.x0 = Vector::Zero(selector.n);
      break;
    case ProblemSelector::Kind::GlmSynthetic: {
      const Dataset ds = make_synthetic_dataset(selector.m, selector.n, selector.seed);
      setup.problem = std::make_unique<GlmProblem>(make_glm(ds, std::nullopt, selector.label()));
      setup.x0 = Vector::Zero(setup.problem->cols());
      break;
    }
    case ProblemSelector::Kind::GlmFile: {
      const Dataset ds = read_libsvm(selector.path);
      setup.problem = std::make_unique<GlmProblem>(make_glm(ds, std::nullopt, selector.label()));
      setup.x0 = Vector::Zero(setup.problem->cols());
      break;
    }
  }
  return setup;
}

void BenchSpec::validate() const {
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "method list is empty");
  if (runs < 1) throw Error(ErrorCode::InvalidConfig, "runs must be at least 1");
  if (jobs < 1) throw Error(ErrorCode::InvalidConfig, "jobs must be at least 1");
  if (diagnostics && !(eta_radius > 0.0)) throw Error(ErrorCode::InvalidConfig, "eta radius must be positive");
  SolverConfig probe;
  probe.threshold = threshold;
  probe.tol = tol;
  probe.max_iter = max_iter;
  probe.validate();
}

bool BenchReport::any_breakdown() const {
  return std::any_of(summaries.begin(), summaries.end(), [](const MethodSummary& s) { return s.breakdown > 0; });
}

BenchReport run_bench(const BenchSpec& spec) {
  spec.validate();
  const ProblemSelector selector = parse_problem_selector(spec.problem);
  const ProblemSetup setup = build_problem(selector);
  const Problem& problem = *setup.problem;

  for (MethodKind method : spec.methods) {
    if (is_glm_hybrid(method) && dynamic_cast<const GlmProblem*>(&problem) == nullptr) {
      throw Error(ErrorCode::InvalidConfig, std::string(to_string(method)) + " needs a glm problem");
    }
  }

  BenchReport report;
  report.spec = spec;
  report.problem_label = selector.label();
  report.problem_name = problem.name();
  report.rows = problem.rows();
  report.cols = problem.cols();
  report.has_solution = problem.known_solution().has_value();

  const std::size_t method_count = spec.methods.size();
  const auto runs = static_cast<std::size_t>(spec.runs);
  report.runs.assign(method_count, std::vector<RunResult>(runs));

  SolveOptions options;
  if (spec.zero_time) options.clock = null_clock();

  auto run_cell = [&](std::size_t cell) {
    const std::size_t mi = cell / runs;
    const std::size_t r = cell % runs;
    SolverConfig config;
    config.method = spec.methods[mi];
    config.threshold = spec.threshold;
    config.tol = spec.tol;
    config.max_iter = spec.max_iter;
    config.seed = spec.base_seed + r;
    config.record_error = spec.track_error;
    RunResult& out = report.runs[mi][r];
    out.run = static_cast<int>(r);
    out.seed = config.seed;
    out.trace = solve(problem, setup.x0, config, options);
  };

  const std::size_t cells = method_count * runs;
  if (spec.jobs == 1) {
    for (std::size_t c = 0; c < cells; ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), cells);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t c = next++; c < cells; c = next++) run_cell(c);
      });
    }
    for (auto& w : workers) w.join();
  }

  for (std::size_t mi = 0; mi < method_count; ++mi) {
    MethodSummary s;
    s.method = spec.methods[mi];
    s.runs = spec.runs;
    double seconds = 0.0;
    for (const RunResult& rr : report.runs[mi]) {
      s.iterations.push_back(rr.trace.total_iterations);
      s.seconds.push_back(rr.trace.total_seconds);
      s.iteration_sum += rr.trace.total_iterations;
      seconds += rr.trace.total_seconds;
      switch (rr.trace.status) {
        case SolveStatus::Converged: ++s.converged; break;
        case SolveStatus::IterationCapReached: ++s.cap_reached; break;
        case SolveStatus::NumericalBreakdown: ++s.breakdown; break;
      }
    }
    s.mean_iterations = static_cast<double>(s.iteration_sum) / spec.runs;
    s.mean_seconds = seconds / spec.runs;
    const auto& first = report.runs[mi].front().trace.records;
    s.first_set_size = first.empty() ? 0 : first.front().set_size;
    s.zero_variance = std::all_of(s.iterations.begin(), s.iterations.end(),
                                  [&](std::int64_t it) { return it == s.iterations.front(); });
    report.summaries.push_back(std::move(s));
  }

  if (spec.diagnostics) {
    const auto x_star = problem.known_solution();
    for (MethodKind method : spec.methods) {
      if (!is_greedy(method) || is_glm_hybrid(method)) continue;
      DiagnosticsResult diag;
      diag.method = method;
      if (!x_star) {
        diag.note = "no known solution; diagnostics skipped";
        report.diagnostics.push_back(std::move(diag));
        continue;
      }
      Rng rng(spec.base_seed);
      diag.eta = estimate_eta(problem, *x_star, spec.eta_radius, spec.eta_pairs, rng);
      diag.eta_rowwise = diag.eta.eta;
      if (diag.eta.eta >= 0.5) {
        Rng cone_rng(spec.base_seed);
        diag.eta = estimate_vector_cone_constant(problem, *x_star, spec.eta_radius, spec.eta_pairs, cone_rng);
        diag.eta_source = "vector";
        diag.note = "row-wise eta >= 1/2; factors use the vector cone constant";
      }
      if (diag.eta.eta >= 0.5) {
        diag.note = "estimated eta >= 1/2 on the sampled ball; factors not defined";
      } else {
        SolverConfig config;
        config.method = method;
        config.threshold = spec.threshold;
        config.tol = spec.tol;
        config.max_iter = spec.max_iter;
        config.seed = spec.base_seed;
        diag.report = collect_factor_report(problem, setup.x0, config, diag.eta.eta);
        if (!spec.threshold.is_default()) {
          if (!diag.note.empty()) diag.note += "; ";
          diag.note += "factors use the relaxed threshold " + spec.threshold.describe();
        }
      }
      report.diagnostics.push_back(std::move(diag));
    }
  }
  return report;
}

std::string emit_table(const BenchReport& report) {
  std::ostringstream out;
  out << "problem " << report.problem_label << " (" << report.rows << "x" << report.cols << "), runs "
      << report.spec.runs << ", tol " << report.spec.tol << ", " << report.spec.threshold.describe() << "\n";
  out << std::left << std::setw(15) << "method" << std::right << std::setw(14) << "mean_IT" << std::setw(14)
      << "mean_CPU_s" << std::setw(11) << "converged" << std::setw(6) << "cap" << std::setw(11) << "breakdown"
      << std::setw(10) << "set0" << "\n";
  for (const MethodSummary& s : report.summaries) {
    out << std::left << std::setw(15) << to_string(s.method) << std::right << std::setw(14) << std::fixed
        << std::setprecision(1) << s.mean_iterations << std::setw(14) << std::setprecision(6) << s.mean_seconds
        << std::setw(11) << s.converged << std::setw(6) << s.cap_reached << std::setw(11) << s.breakdown
        << std::setw(10) << s.first_set_size;
    if (s.zero_variance && s.runs > 1) out << "  (identical runs)";
    out << "\n";
    out.unsetf(std::ios::fixed);
  }
  return out.str();
}

std::string emit_json(const BenchReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["problem"] = report.spec.problem;
  j["problem_label"] = report.problem_label;
  j["rows"] = report.rows;
  j["cols"] = report.cols;
  j["runs"] = report.spec.runs;
  j["base_seed"] = report.spec.base_seed;
  j["tol"] = report.spec.tol;
  j["max_iter"] = report.spec.max_iter;
  j["threshold"] = report.spec.threshold.describe();
  ordered_json methods = ordered_json::array();
  for (const MethodSummary& s : report.summaries) {
    ordered_json m;
    m["method"] = std::string(to_string(s.method));
    m["mean_iterations"] = s.mean_iterations;
    m["iteration_sum"] = s.iteration_sum;
    m["mean_seconds"] = s.mean_seconds;
    m["converged"] = s.converged;
    m["cap_reached"] = s.cap_reached;
    m["breakdown"] = s.breakdown;
    m["first_set_size"] = s.first_set_size;
    m["zero_variance"] = s.zero_variance;
    m["iterations"] = s.iterations;
    m["seconds"] = s.seconds;
    methods.push_back(std::move(m));
  }
  j["methods"] = std::move(methods);
  if (!report.diagnostics.empty()) {
    ordered_json diags = ordered_json::array();
    for (const DiagnosticsResult& d : report.diagnostics) {
      ordered_json e;
      e["method"] = std::string(to_string(d.method));
      e["eta"] = d.eta.eta;
      e["eta_source"] = d.eta_source;
      e["eta_rowwise"] = d.eta_rowwise;
      e["eta_radius"] = d.eta.radius;
      e["eta_pairs"] = d.eta.sample_count;
      e["note"] = d.note;
      if (d.report) {
        std::size_t ordered = 0;
        std::size_t bound_applies = 0;
        for (const FactorRecord& r : d.report->records) {
          if (r.rho && *r.rho < r.rho_nrk) ++ordered;
          if (r.rho) ++bound_applies;
        }
        e["iterations"] = d.report->records.size();
        e["rho_below_nrk"] = ordered;
        e["bound_applies"] = bound_applies;
      }
      diags.push_back(std::move(e));
    }
    j["diagnostics"] = std::move(diags);
  }
  return j.dump(2) + "\n";
}

std::string emit_csv(const SolveTrace& trace, bool with_error) {
  std::string out = with_error ? "k,residual_sq,elapsed_s,selected_size,error_sq\n"
                               : "k,residual_sq,elapsed_s,selected_size\n";
  for (const IterationRecord& r : trace.records) {
    out += std::to_string(r.k);
    out += ',';
    out += format_number(r.residual_sq);
    out += ',';
    out += format_number(r.elapsed);
    out += ',';
    out += std::to_string(r.set_size);
    if (with_error) {
      out += ',';
      if (r.error_sq) out += format_number(*r.error_sq);
    }
    out += '\n';
  }
  return out;
}

std::string emit_diagnostics_csv(const FactorReport& report) {
  std::string out = "k,threshold,h2,set_size,alpha,rho,rho_nrk,measured\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const FactorRecord& r : report.records) {
    out += std::to_string(r.k) + ',' + format_number(r.threshold) + ',' + format_number(r.h2) + ',' +
           std::to_string(r.set_size) + ',' + opt(r.alpha) + ',' + opt(r.rho) + ',' + format_number(r.rho_nrk) +
           ',' + opt(r.measured) + '\n';
  }
  return out;
}

std::vector<CsvRow> parse_trace_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "trace CSV is empty");
  const auto header = split(line, ',');
  const bool with_error = header.size() == 5;
  if (header.size() < 4 || header[0] != "k" || header[1] != "residual_sq" || header[2] != "elapsed_s" ||
      header[3] != "selected_size" || (with_error && header[4] != "error_sq")) {
    throw Error(ErrorCode::ParseError, "unexpected trace CSV header '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw Error(ErrorCode::ParseError, "bad trace CSV row '" + line + "'");
    CsvRow row;
    row.k = parse_number<std::int64_t>(f[0], "k");
    row.residual_sq = parse_number<double>(f[1], "residual_sq");
    row.elapsed_s = parse_number<double>(f[2], "elapsed_s");
    row.selected_size = parse_number<std::size_t>(f[3], "selected_size");
    if (with_error && !f[4].empty()) row.error_sq = parse_number<double>(f[4], "error_sq");
    rows.push_back(row);
  }
  return rows;
}

std::string trace_file_name(const BenchReport& report, MethodKind method, int run) {
  return "trace_" + report.problem_label + "_" + std::string(to_string(method)) + "_" + std::to_string(run) + ".csv";
}

void write_report(const BenchReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());

  write_file(out_dir / "summary.json", emit_json(report));
  write_file(out_dir / "summary.txt", emit_table(report));
  const bool with_error = report.spec.track_error && report.has_solution;
  for (std::size_t mi = 0; mi < report.summaries.size(); ++mi) {
    for (const RunResult& rr : report.runs[mi]) {
      write_file(out_dir / trace_file_name(report, report.summaries[mi].method, rr.run),
                 emit_csv(rr.trace, with_error));
    }
  }
  for (const DiagnosticsResult& d : report.diagnostics) {
    if (!d.report) continue;
    write_file(out_dir / ("diagnostics_" + report.problem_label + "_" + std::string(to_string(d.method)) + ".csv"),
               emit_diagnostics_csv(*d.report));
  }
}

}  // namespace cnk::bench
