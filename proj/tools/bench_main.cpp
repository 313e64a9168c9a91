#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "cnk/bench/harness.hpp"
#include "cnk/error.hpp"
#include "cnk/problems/libsvm.hpp"

namespace {

std::vector<cnk::MethodKind> parse_methods(const std::vector<std::string>& names) {
  std::vector<cnk::MethodKind> out;
  for (const auto& name : names) out.push_back(cnk::parse_method(name));
  return out;
}

int print_dataset_info(const std::string& path) {
  const cnk::Dataset ds = cnk::read_libsvm(path);
  std::map<double, std::size_t> counts;
  for (double y : ds.labels) ++counts[y];

  const double lambda = 1.0 / static_cast<double>(ds.p);
  const cnk::DenseMatrix a = ds.dense_samples();
  const Eigen::MatrixXd gram = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();

  std::cout << "file      " << path << "\n"
            << "features  " << ds.d << "\n"
            << "samples   " << ds.p << "\n"
            << "nnz       " << ds.entries.size() << "\n"
            << "density   " << ds.density() << "\n";
  for (const auto& [label, count] : counts) {
    std::cout << "label " << std::showpos << label << std::noshowpos << "  " << count << "\n";
  }
  std::cout << "lambda    " << lambda << "\n"
            << "L         " << lmax / (4.0 * static_cast<double>(ds.p)) + lambda << "\n"
            << "cond(AA^T) ";
  if (lmin > 0.0) {
    std::cout << lmax / lmin << "\n";
  } else {
    std::cout << "inf\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy capped nonlinear Kaczmarz benchmark harness"};
  app.require_subcommand(1);

  cnk::bench::BenchSpec spec;
  std::string methods_text = "nrk,dr-cnk,rd-cnk,db-cnk,rb-cnk";
  std::string out_dir;
  std::optional<double> theta;
  std::optional<double> xi;
  long long max_iter = spec.max_iter;

  auto* run = app.add_subcommand("run", "Solve a problem with several methods and report IT/CPU");
  run->add_option("--problem", spec.problem, "brown:N | linear:M,N[,SEED] | glm:synthetic:P,D,SEED | glm:PATH")
      ->required();
  run->add_option("--methods", methods_text, "Comma-separated method names")->capture_default_str();
  run->add_option("--runs", spec.runs, "Runs per method")->capture_default_str();
  run->add_option("--seed", spec.base_seed, "Base seed; run r uses seed+r")->capture_default_str();
  run->add_option("--tol", spec.tol, "Stop when ||f||^2 < tol")->capture_default_str();
  run->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  auto* theta_opt = run->add_option("--theta", theta, "Convex threshold weight in [0,1]");
  run->add_option("--xi", xi, "Scaled threshold factor in (0,1]")->excludes(theta_opt);
  run->add_option("--out", out_dir, "Output directory (BENCH_OUT overrides)");
  run->add_flag("--track-error", spec.track_error, "Record ||x_k - x*||^2 when x* is known");
  run->add_flag("--diagnostics", spec.diagnostics, "Estimate eta and dump convergence-factor traces");
  run->add_option("--eta-radius", spec.eta_radius, "Ball radius for the eta estimate")->capture_default_str();
  run->add_option("--jobs", spec.jobs, "Worker threads; 1 gives serial timing")->capture_default_str();
  run->add_flag("--zero-time", spec.zero_time, "Write elapsed columns as 0");

  std::string libsvm_path;
  bool info = false;
  auto* parse = app.add_subcommand("parse-libsvm", "Parse a LIBSVM file and print dataset statistics");
  parse->add_option("path", libsvm_path, "Dataset path")->required();
  parse->add_flag("--info", info, "Print statistics");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      if (info) return print_dataset_info(libsvm_path);
      const cnk::Dataset ds = cnk::read_libsvm(libsvm_path);
      std::cout << ds.p << " samples, " << ds.d << " features\n";
      return 0;
    }

    spec.methods = parse_methods(CLI::detail::split(methods_text, ','));
    spec.max_iter = max_iter;
    if (xi) {
      spec.threshold = cnk::ThresholdMode::scaled(*xi);
    } else if (theta) {
      spec.threshold = cnk::ThresholdMode::convex(*theta);
    }
    if (const char* env = std::getenv("BENCH_OUT"); env != nullptr && *env != '\0') out_dir = env;
    spec.out_dir = out_dir;

    const cnk::bench::BenchReport report = cnk::bench::run_bench(spec);
    std::cout << cnk::bench::emit_table(report);
    for (const auto& d : report.diagnostics) {
      std::cout << "diagnostics " << cnk::to_string(d.method) << ": eta " << d.eta.eta;
      if (!d.note.empty()) std::cout << " (" << d.note << ")";
      std::cout << "\n";
    }
    if (!spec.out_dir.empty()) cnk::bench::write_report(report, spec.out_dir);
    return report.any_breakdown() ? 2 : 0;
  } catch (const cnk::Error& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return 1;
  }
}
