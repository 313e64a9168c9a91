// Prints one PASS/FAIL line per acceptance criterion; exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cnk/bench/harness.hpp"
#include "cnk/diagnostics.hpp"
#include "cnk/error.hpp"
#include "cnk/linalg.hpp"
#include "cnk/problems/brown.hpp"
#include "cnk/problems/glm.hpp"
#include "cnk/problems/libsvm.hpp"
#include "cnk/problems/linear.hpp"
#include "cnk/selection.hpp"
#include "cnk/solvers.hpp"
#include "support/oracles.hpp"

using namespace cnk;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [FAIL: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bench::BenchSpec brown_spec(Index n, std::vector<MethodKind> methods, int runs, std::uint64_t seed) {
  bench::BenchSpec s;
  s.problem = "brown:" + std::to_string(n);
  s.methods = std::move(methods);
  s.runs = runs;
  s.base_seed = seed;
  s.jobs = 1;
  return s;
}

const bench::MethodSummary& summary_of(const bench::BenchReport& r, MethodKind m) {
  for (const auto& s : r.summaries)
    if (s.method == m) return s;
  throw Error(ErrorCode::InvalidConfig, "method missing from report");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void ac1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = bench::run_bench(brown_spec(50, {MethodKind::NRK, MethodKind::DR_CNK, MethodKind::RD_CNK}, 10, 7));
  const double elapsed = seconds_since(t0);
  const double nrk = summary_of(r, MethodKind::NRK).mean_iterations;
  const double dr = summary_of(r, MethodKind::DR_CNK).mean_iterations;
  const double rd = summary_of(r, MethodKind::RD_CNK).mean_iterations;
  o.detail << "Brown n=50 mean IT: NRK " << nrk << " (ref 4780.2), DR-CNK " << dr << " (ref 755.2), RD-CNK " << rd
           << " (ref 755); " << elapsed << " s";
  for (const auto& s : r.summaries) o.require(s.converged == 10, std::string(to_string(s.method)) + " not all converged");
  o.require(dr >= 600 && dr <= 950, "DR-CNK mean IT outside [600,950]");
  o.require(rd >= 600 && rd <= 950, "RD-CNK mean IT outside [600,950]");
  o.require(nrk >= 3500 && nrk <= 6200, "NRK mean IT outside [3500,6200]");
  o.require(elapsed < 60.0, "runtime over one minute");
}

void ac2(Outcome& o) {
  bool exact = true;
  for (Index n : {50, 100, 200}) {
    const auto r = bench::run_bench(brown_spec(n, {MethodKind::DB_CNK, MethodKind::RB_CNK}, 1, 0));
    const auto& db = summary_of(r, MethodKind::DB_CNK);
    const auto& rb = summary_of(r, MethodKind::RB_CNK);
    o.detail << "n=" << n << ": DB IT " << db.iterations[0] << " |U_0|=" << db.first_set_size << ", RB IT "
             << rb.iterations[0] << " |I_0|=" << rb.first_set_size << "; ";
    o.require(db.converged == 1 && db.iterations[0] <= 3, "DB-CNK n=" + std::to_string(n));
    o.require(rb.converged == 1 && rb.iterations[0] <= 3, "RB-CNK n=" + std::to_string(n));
    exact = exact && db.iterations[0] == 1 && rb.iterations[0] == 1;
  }
  o.detail << (exact ? "exact match with reported IT=1" : "IT=1 not reached everywhere");
}

void ac3(Outcome& o) {
  const auto r = bench::run_bench(brown_spec(200, {MethodKind::NRK, MethodKind::DR_CNK}, 10, 7));
  const auto& nrk = summary_of(r, MethodKind::NRK);
  const auto& dr = summary_of(r, MethodKind::DR_CNK);
  const double it_ratio = nrk.mean_iterations / dr.mean_iterations;
  const double cpu_ratio = nrk.mean_seconds / dr.mean_seconds;
  o.detail << "Brown n=200: mean IT NRK " << nrk.mean_iterations << " / DR-CNK " << dr.mean_iterations
           << " = " << it_ratio << " (ref 22.7); wall-clock ratio " << cpu_ratio;
  o.require(nrk.converged == 10 && dr.converged == 10, "not all runs converged");
  o.require(it_ratio >= 10.0, "IT ratio below 10");
  o.require(cpu_ratio >= 3.0, "wall-clock ratio below 3");
}

void ac4(Outcome& o) {
  std::size_t compared = 0, mismatches = 0;
  for (int sys = 0; sys < 50; ++sys) {
    const LinearProblem p = make_random_consistent_linear(100, 50, 9000 + static_cast<std::uint64_t>(sys));
    for (MethodKind m : {MethodKind::DR_CNK, MethodKind::RD_CNK}) {
      SolverConfig c;
      c.method = m;
      c.seed = static_cast<std::uint64_t>(sys);
      c.max_iter = 100;
      c.tol = 1e-300;
      SolveOptions opts;
      opts.observer = [&](const StepEvent& e) {
        const auto ref = m == MethodKind::DR_CNK ? oracle::grk_set(p.matrix(), p.rhs(), *e.x_before)
                                                 : oracle::grmk_set(p.matrix(), p.rhs(), *e.x_before);
        ++compared;
        if (ref != e.selection->set) ++mismatches;
      };
      solve(p, Vector::Zero(50), c, opts);
    }
  }
  o.detail << compared << " iterate sets compared (50 systems x 2 methods x 100 steps), " << mismatches
           << " mismatches";
  o.require(compared == 50 * 2 * 100, "fewer than 100 iterations per run");
  o.require(mismatches == 0, "set mismatch");
}

void ac5(Outcome& o) {
  Rng rng(2025);
  const int states = 5000;
  std::size_t eps_fail = 0, delta_fail = 0, empty = 0, argmax_missing = 0, norm_fail = 0, homog_fail = 0;
  for (int t = 0; t < states; ++t) {
    const auto s = oracle::random_geometry(rng);
    const RowGeometry g = RowGeometry::from(s.residual, s.grad_sq);
    const Index m = g.rows();
    const ThresholdMode mode = ThresholdMode::convex(rng.uniform());
    const double eps = compute_epsilon(g, mode);
    const double delta = compute_delta(g, m, mode);
    if (eps * g.jac_fro_sq < 1.0 - 1e-12) ++eps_fail;
    if (delta < (1.0 / static_cast<double>(m)) * (1 - 1e-12) || delta > 1.0 + 1e-12) ++delta_fail;
    const SelectionResult u = build_distance_set(g, eps);
    const SelectionResult i = build_residual_set(g, delta);
    if (u.set.empty() || i.set.empty()) ++empty;

    Index best_u = g.active.front();
    for (Index r : g.active) {
      if (g.residual(r) * g.residual(r) / g.grad_sq_norms(r) >
          g.residual(best_u) * g.residual(best_u) / g.grad_sq_norms(best_u))
        best_u = r;
    }
    Index best_i = 0;
    g.residual.cwiseAbs2().maxCoeff(&best_i);
    if (std::find(u.set.begin(), u.set.end(), best_u) == u.set.end() ||
        std::find(i.set.begin(), i.set.end(), best_i) == i.set.end())
      ++argmax_missing;

    for (const SelectionResult* sel : {&u, &i}) {
      double total = 0.0;
      for (double p : sel->probabilities()) total += p;
      if (std::abs(total - 1.0) > 1e-12) ++norm_fail;
    }

    const double c = std::ldexp(1.0, static_cast<int>(rng.uniform_index(41)) - 20);
    const RowGeometry h = RowGeometry::from(c * s.residual, (c * c) * s.grad_sq);
    const SelectionResult u2 = build_distance_set(h, compute_epsilon(h, mode));
    const SelectionResult i2 = build_residual_set(h, compute_delta(h, m, mode));
    bool same = u2.set == u.set && i2.set == i.set;
    if (same) {
      const auto p1 = u.probabilities(), p2 = u2.probabilities();
      for (std::size_t k = 0; k < p1.size(); ++k) same = same && std::abs(p1[k] - p2[k]) <= 1e-12;
    }
    if (!same) ++homog_fail;
  }
  o.detail << states << " random states: eps*fro<1: " << eps_fail << ", delta out of [1/m,1]: " << delta_fail
           << ", empty sets: " << empty << ", argmax missing: " << argmax_missing
           << ", weights not normalized: " << norm_fail << ", rescaling changed selection: " << homog_fail;
  o.require(eps_fail + delta_fail + empty + argmax_missing + norm_fail + homog_fail == 0, "invariant violated");
}

void ac6(Outcome& o) {
  Rng rng(66);
  double worst_brown = 0.0, worst_glm = 0.0;
  BrownProblem brown(10);
  const GlmProblem glm = make_glm(make_synthetic_dataset(15, 4, 3));
  for (int t = 0; t < 20; ++t) {
    const Vector xb = Vector::Ones(10) + 0.5 * rng.normal_vector(10);
    for (Index i = 0; i < brown.rows(); ++i) {
      worst_brown = std::max(worst_brown, oracle::relative_error(brown.gradient_row(i, xb), oracle::fd_gradient(brown, i, xb)));
    }
    const Vector xg = rng.normal_vector(glm.cols());
    for (Index i = 0; i < glm.rows(); ++i) {
      worst_glm = std::max(worst_glm, oracle::relative_error(glm.gradient_row(i, xg), oracle::fd_gradient(glm, i, xg)));
    }
  }
  const LinearProblem lin = make_random_consistent_linear(30, 10, 5);
  Rng eta_rng(1);
  const EtaEstimate eta = estimate_eta(lin, Vector::Zero(10), 2.0, 10000, eta_rng);
  o.detail << "max relative FD error: Brown " << worst_brown << ", GLM " << worst_glm << "; linear eta over "
           << eta.sample_count << " pairs = " << eta.eta;
  o.require(worst_brown <= 1e-5, "Brown gradient");
  o.require(worst_glm <= 1e-5, "GLM gradient");
  o.require(eta.eta == 0.0 && eta.sample_count == 10000, "linear eta not exactly 0");
}

void ac7(Outcome& o) {
  Rng rng(77);
  double worst = 0.0;
  int deficient = 0;
  for (int t = 0; t < 200; ++t) {
    const Index rows = 1 + rng.uniform_index(50);
    const Index cols = 1 + rng.uniform_index(50);
    const Index full = std::min(rows, cols);
    DenseMatrix j;
    if (t % 2 == 0 && full > 1) {
      j = oracle::low_rank_matrix(rng, rows, cols, 1 + rng.uniform_index(full - 1));
      ++deficient;
    } else {
      j = oracle::gaussian_matrix(rng, rows, cols);
    }
    const Vector rhs = rng.normal_vector(rows);
    worst = std::max(worst, oracle::relative_error(min_norm_least_squares(j, rhs), Vector(oracle::pinv(j) * rhs)));
  }
  double worst_single = 0.0;
  BrownProblem brown(12);
  for (int t = 0; t < 200; ++t) {
    const Vector x = Vector::Ones(12) + 0.4 * rng.normal_vector(12);
    const Index i = rng.uniform_index(12);
    const Vector a = block_step(x, IndexList{i}, brown);
    const Vector b = kaczmarz_step(x, brown.residual(x)(i), brown.gradient_row(i, x));
    worst_single = std::max(worst_single, (a - b).norm() / std::max(1.0, b.norm()));
  }
  o.detail << "200 matrices (" << deficient << " rank-deficient): max relative error vs SVD oracle " << worst
           << "; singleton block vs single step " << worst_single;
  o.require(worst <= 1e-8, "min-norm solve");
  o.require(worst_single <= 1e-12, "singleton block step");
}

void ac8(Outcome& o) {
  const MethodKind methods[] = {MethodKind::DR_CNK, MethodKind::RD_CNK, MethodKind::DB_CNK, MethodKind::RB_CNK};
  std::vector<double> its[4];
  int failures = 0;
  double worst_linear = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GlmProblem glm = make_glm(make_synthetic_dataset(200, 10, seed));
    const Vector x0 = Vector::Zero(glm.cols());
    for (int k = 0; k < 4; ++k) {
      SolverConfig c;
      c.method = methods[k];
      c.seed = seed;
      const SolveTrace t = solve(glm, x0, c);
      if (t.status != SolveStatus::Converged) ++failures;
      its[k].push_back(static_cast<double>(t.total_iterations));
    }
    for (MethodKind h : {MethodKind::GLM_HYBRID_DB, MethodKind::GLM_HYBRID_RB}) {
      SolverConfig c;
      c.method = h;
      c.seed = seed;
      SolveOptions opts;
      opts.observer = [&](const StepEvent& e) {
        if (e.sub_step == 0) worst_linear = std::max(worst_linear, glm.linear_residual(*e.x_after).cwiseAbs().maxCoeff());
      };
      const SolveTrace t = solve(glm, x0, c, opts);
      if (t.status != SolveStatus::Converged) ++failures;
    }
  }
  const double med[4] = {median(its[0]), median(its[1]), median(its[2]), median(its[3])};
  o.detail << "synthetic GLM p=200 d=10, 10 seeds: median IT DR " << med[0] << ", RD " << med[1] << ", DB " << med[2]
           << ", RB " << med[3] << "; unconverged runs " << failures << "; max linear-row residual after sub-step "
           << worst_linear;
  o.require(failures == 0, "a run did not converge");
  o.require(med[2] <= med[0], "DB median above DR");
  o.require(med[3] <= med[1], "RB median above RD");
  o.require(worst_linear <= 1e-12, "linear rows not annihilated");
}

struct FactorTally {
  std::size_t steps = 0, applicable = 0, order_fail = 0, factor_fail = 0, bound_fail = 0;
};

FactorTally tally_factors(const Problem& p, const Vector& x0, double eta) {
  FactorTally t;
  for (MethodKind m : {MethodKind::DR_CNK, MethodKind::RD_CNK, MethodKind::DB_CNK, MethodKind::RB_CNK}) {
    SolverConfig c;
    c.method = m;
    c.seed = 3;
    c.tol = 1e-16;
    const FactorReport rep = collect_factor_report(p, x0, c, eta);
    for (const FactorRecord& r : rep.records) {
      ++t.steps;
      if (!r.rho) continue;
      ++t.applicable;
      if (!is_block(m) && !(*r.rho < r.rho_nrk)) ++t.order_fail;
      if (is_block(m) && !(*r.rho < 1.0)) ++t.factor_fail;
      if (r.measured && *r.measured > *r.rho + 1e-8) ++t.bound_fail;
    }
  }
  return t;
}

void print_tally(Outcome& o, const FactorTally& t) {
  o.detail << t.steps << " instrumented iterations (" << t.applicable
           << " with the bound applicable): ordering failures " << t.order_fail
           << ", block factor >= 1: " << t.factor_fail << ", measured above bound: " << t.bound_fail;
}

void ac9(Outcome& o) {
  BrownProblem p(10);
  Vector x0 = Vector::Ones(10);
  x0(0) += 0.02;
  x0(4) -= 0.03;
  x0(9) += 0.01;

  Rng rng(99);
  const EtaEstimate eta = estimate_eta(p, Vector::Ones(10), 0.05, 20000, rng);
  o.detail << "row-wise eta over radius-0.05 ball = " << eta.eta << ";";
  o.require(eta.eta < 0.5, "row-wise eta not below 1/2");
  if (eta.eta < 0.5) {
    const FactorTally t = tally_factors(p, x0, eta.eta);
    print_tally(o, t);
    o.require(t.order_fail == 0, "factor ordering");
    o.require(t.factor_fail == 0, "block factor not below 1");
    o.require(t.bound_fail == 0, "measured ratio above bound");
    return;
  }

  // informational only: the same checks with the vector cone constant
  Rng vrng(99);
  const EtaEstimate cone = estimate_vector_cone_constant(p, Vector::Ones(10), 0.05, 20000, vrng);
  o.detail << " [info, not scored] vector cone constant = " << cone.eta << ": ";
  if (cone.eta < 0.5) print_tally(o, tally_factors(p, x0, cone.eta));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac10(Outcome& o) {
  // determinism: two full bench runs written to disk
  bench::BenchSpec s = brown_spec(50, {MethodKind::NRK, MethodKind::DR_CNK, MethodKind::RD_CNK}, 3, 11);
  s.zero_time = true;
  const auto base = std::filesystem::temp_directory_path() / "cnk_acceptance";
  std::filesystem::remove_all(base);
  bench::write_report(bench::run_bench(s), base / "a");
  bench::write_report(bench::run_bench(s), base / "b");
  std::size_t files = 0, differing = 0;
  for (const auto& entry : std::filesystem::directory_iterator(base / "a")) {
    const auto name = entry.path().filename();
    if (name.string().rfind("trace_", 0) != 0) continue;
    ++files;
    if (slurp(entry.path()) != slurp(base / "b" / name)) ++differing;
  }
  std::filesystem::remove_all(base);

  // LIBSVM round trip and malformed input
  Rng rng(10);
  std::size_t round_trip_fail = 0;
  for (int t = 0; t < 100; ++t) {
    Dataset ds;
    ds.p = 1 + rng.uniform_index(10);
    ds.d = 1 + rng.uniform_index(10);
    for (Index i = 0; i < ds.p; ++i) {
      ds.labels.push_back(rng.uniform() < 0.5 ? -1.0 : 1.0);
      for (Index f = 1; f <= ds.d; ++f) {
        if (f == ds.d && i == ds.p - 1) {
          ds.entries.push_back({i, f, rng.normal()});
        } else if (rng.uniform() < 0.5) {
          ds.entries.push_back({i, f, rng.normal() * 1e3});
        }
      }
    }
    std::ostringstream out;
    write_libsvm(out, ds);
    std::istringstream in(out.str());
    if (!(parse_libsvm(in) == ds)) ++round_trip_fail;
  }
  std::size_t malformed_missed = 0;
  for (const char* bad : {"1 2:abc\n", "+1 0:1\n", "+1 2:1 1:1\n", "x 1:1\n", "+1 1\n", "1 1:1\n2 1:1\n3 1:1\n"}) {
    std::istringstream in(bad);
    try {
      parse_libsvm(in);
      ++malformed_missed;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ParseError) ++malformed_missed;
    }
  }

  // golden trace
  bench::BenchSpec g;
  g.problem = "brown:4";
  g.methods = {MethodKind::DR_CNK};
  g.runs = 1;
  g.zero_time = true;
  const std::string golden = slurp(std::filesystem::path(CNK_TEST_DATA_DIR) / "golden_brown4_dr-cnk_0.csv");
  const bool golden_ok = !golden.empty() && bench::emit_csv(bench::run_bench(g).runs[0][0].trace, false) == golden;

  o.detail << files << " trace CSVs rewritten, " << differing << " differ; LIBSVM round-trip failures "
           << round_trip_fail << "/100, malformed inputs accepted " << malformed_missed << "/6; golden CSV "
           << (golden_ok ? "matches" : "differs");
  o.require(files == 9 && differing == 0, "trace determinism");
  o.require(round_trip_fail == 0, "LIBSVM round trip");
  o.require(malformed_missed == 0, "malformed LIBSVM input");
  o.require(golden_ok, "golden CSV");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%-5s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
