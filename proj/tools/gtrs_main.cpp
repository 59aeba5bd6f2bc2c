// Command-line front end: solve problem bundles, generate test suites, run
// benchmark sweeps and cross-check against the dense oracle.
#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "bundle.hpp"
#include "gtrs/matrix_market.hpp"
#include "gtrs/oracle.hpp"
#include "gtrs/probgen.hpp"
#include "gtrs/solver.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gtrs;

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitInputError = 1;
constexpr int kExitToleranceFailure = 2;

struct BundleFlags {
  std::string manifest;
  std::string a_matrix, b_matrix, a_vector, b_vector;
  double beta = std::numeric_limits<double>::quiet_NaN();
  double lambda_hat = std::numeric_limits<double>::quiet_NaN();

  void attach(CLI::App* cmd) {
    cmd->add_option("--manifest", manifest, "Bundle manifest (JSON)");
    cmd->add_option("--A", a_matrix, "Matrix Market file for A");
    cmd->add_option("--B", b_matrix, "Matrix Market file for B");
    cmd->add_option("--a", a_vector, "Matrix Market vector a");
    cmd->add_option("--b", b_vector, "Matrix Market vector b");
    cmd->add_option("--beta", beta, "Constraint offset");
    cmd->add_option("--lambda-hat", lambda_hat, "Known multiplier with A + lambda_hat B PD");
  }

  cli::ProblemBundle resolve() const {
    cli::ProblemBundle bundle;
    if (!manifest.empty()) {
      bundle = cli::read_manifest(manifest);
      if (!std::isnan(beta) && bundle.beta && *bundle.beta != beta) {
        std::cerr << "warning: --beta " << beta << " conflicts with the manifest value "
                  << *bundle.beta << "; the manifest wins\n";
      }
      if (!std::isnan(lambda_hat) && bundle.lambda_hat && *bundle.lambda_hat != lambda_hat) {
        std::cerr << "warning: --lambda-hat " << lambda_hat
                  << " conflicts with the manifest value " << *bundle.lambda_hat
                  << "; the manifest wins\n";
      }
      if (!bundle.beta && !std::isnan(beta)) bundle.beta = beta;
      if (!bundle.lambda_hat && !std::isnan(lambda_hat)) bundle.lambda_hat = lambda_hat;
      return bundle;
    }
    if (a_matrix.empty() || b_matrix.empty() || a_vector.empty() || b_vector.empty()) {
      throw std::runtime_error(
          "either --manifest or all of --A/--B/--a/--b must be given");
    }
    bundle.a_matrix = a_matrix;
    bundle.b_matrix = b_matrix;
    bundle.a_vector = a_vector;
    bundle.b_vector = b_vector;
    if (!std::isnan(beta)) bundle.beta = beta;
    if (!std::isnan(lambda_hat)) bundle.lambda_hat = lambda_hat;
    return bundle;
  }
};

struct SolveFlags {
  double tol_kkt = 1e-8;
  double tol_width = 1e-11;
  int max_iter = 200;
  bool no_acceleration = false;
  std::string out;
  std::string x_out;
  bool trace = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-kkt", tol_kkt, "Success criterion tolerance")->capture_default_str();
    cmd->add_option("--tol-width", tol_width, "Relative bracket width tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "Secular iteration cap")->capture_default_str();
    cmd->add_flag("--no-acceleration", no_acceleration,
                  "Plain bisection: no interpolation, no primal step, width-only termination");
    cmd->add_option("--out", out, "Write the machine-readable report here");
    cmd->add_option("--x-out", x_out, "Write the solution vector here (Matrix Market)");
    cmd->add_flag("--trace", trace, "Include the phi-evaluation trace in the report");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.kkt_tol = tol_kkt;
    cfg.width_tol = tol_width;
    cfg.secular_max_iters = max_iter;
    if (no_acceleration) {
      cfg.use_interpolation = false;
      cfg.use_primal_step = false;
      cfg.kkt_termination = false;
    }
    return cfg;
  }
};

int run_solve(const BundleFlags& bundle_flags, const SolveFlags& solve_flags) {
  GtrsProblem prob = bundle_flags.resolve().load();
  GtrsOutcome out = solve(prob, solve_flags.config());

  cli::RunReport report{"solver", out, solve_flags.trace};
  std::cout << "gtrs solve\n";
  cli::print_report(std::cout, report);
  if (!solve_flags.out.empty()) cli::write_report_json(solve_flags.out, report);
  if (!solve_flags.x_out.empty()) write_vector_market_file(solve_flags.x_out, out.x_star);
  return out.success ? kExitSuccess : kExitToleranceFailure;
}

int run_oracle(const BundleFlags& bundle_flags, const SolveFlags& solve_flags) {
  GtrsProblem prob = bundle_flags.resolve().load();
  oracle::OracleOptions opts;
  opts.kkt_tol = solve_flags.tol_kkt;
  oracle::OracleResult res = oracle::dense_solve(prob, opts);

  cli::RunReport report{"oracle", res.outcome, false};
  std::cout << "gtrs oracle\n";
  cli::print_report(std::cout, report);
  if (!solve_flags.out.empty()) cli::write_report_json(solve_flags.out, report);
  if (!solve_flags.x_out.empty()) write_vector_market_file(solve_flags.x_out, res.outcome.x_star);
  return res.outcome.success ? kExitSuccess : kExitToleranceFailure;
}

struct GenerateFlags {
  Index n = 100;
  double density = 1e-2;
  double cond = 10.0;
  std::string case_name = "easy";
  std::string class_name = "1";
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "Dimension")->capture_default_str();
    cmd->add_option("--density", density, "Target nonzero density")->capture_default_str();
    cmd->add_option("--cond", cond, "Condition number of the definite factor")
        ->capture_default_str();
    cmd->add_option("--case", case_name, "easy | hard1 | hard2")->capture_default_str();
    cmd->add_option("--class", class_name, "1 | 2")->capture_default_str();
    cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
    cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  }
};

int run_generate(const GenerateFlags& flags) {
  using namespace probgen;
  GenSpec spec;
  spec.n = flags.n;
  spec.density = flags.density;
  spec.cond = flags.cond;
  spec.seed = flags.seed;
  auto case_kind = case_from_string(flags.case_name);
  if (!case_kind) throw std::runtime_error("unknown --case '" + flags.case_name + "'");
  auto class_kind = class_from_string(flags.class_name);
  if (!class_kind) throw std::runtime_error("unknown --class '" + flags.class_name + "'");
  spec.case_kind = *case_kind;
  spec.class_kind = *class_kind;
  spec.validate();

  GenArtifact art = generate(spec);
  if (art.density_raised) {
    std::cerr << "warning: density below one entry per row; raised to the diagonal minimum\n";
  }

  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  write_matrix_market_file((dir / "A.mtx").string(), art.problem.A);
  write_matrix_market_file((dir / "B.mtx").string(), art.problem.B);
  write_vector_market_file((dir / "a.mtx").string(), art.problem.a);
  write_vector_market_file((dir / "b.mtx").string(), art.problem.b);

  cli::ProblemBundle bundle;
  bundle.a_matrix = "A.mtx";
  bundle.b_matrix = "B.mtx";
  bundle.a_vector = "a.mtx";
  bundle.b_vector = "b.mtx";
  bundle.beta = art.problem.beta;
  bundle.lambda_hat = art.problem.lambda_hat;
  bundle.seed = spec.seed;
  bundle.expected_case = to_string(spec.case_kind);
  bundle.klass = to_string(spec.class_kind);
  cli::write_manifest(dir / "manifest.json", bundle);

  std::cout << "generated " << to_string(spec.case_kind) << " class " << to_string(spec.class_kind)
            << " instance: n=" << spec.n << " nnz(A)=" << art.problem.A.stored_nonzeros()
            << " nnz(B)=" << art.problem.B.stored_nonzeros() << " beta=" << art.problem.beta
            << " planted_lambda=" << art.planted_lambda << " retries=" << art.retries << "\n";
  std::cout << "wrote " << (dir / "manifest.json").string() << "\n";
  return kExitSuccess;
}

struct BenchFlags {
  std::vector<Index> sizes{100};
  std::vector<double> conds{10.0};
  std::vector<std::string> cases{"easy", "hard1", "hard2"};
  std::vector<std::string> classes{"1", "2"};
  int reps = 3;
  double density = 1e-2;
  Index oracle_max_n = 500;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sizes", sizes, "Dimensions")->delimiter(',')->capture_default_str();
    cmd->add_option("--conds", conds, "Condition numbers")->delimiter(',')->capture_default_str();
    cmd->add_option("--cases", cases, "Cases from {easy, hard1, hard2}")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--classes", classes, "Classes from {1, 2}")
        ->delimiter(',')
        ->capture_default_str();
    cmd->add_option("--reps", reps, "Instances per cell")->capture_default_str();
    cmd->add_option("--density", density, "Target density")->capture_default_str();
    cmd->add_option("--oracle-max-n", oracle_max_n,
                    "Compare against the dense oracle up to this dimension")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
    cmd->add_option("--jobs", jobs, "Parallel instance workers")->capture_default_str();
    cmd->add_option("--out", out, "Write the machine-readable table here");
  }
};

struct BenchInstanceResult {
  bool solver_success = false;
  bool failed = false;
  std::string error;
  double time_s = 0.0;
  double accuracy = 0.0;
  std::int64_t matvecs = 0;
};

int run_bench(const BenchFlags& flags) {
  using namespace probgen;

  struct Cell {
    std::string case_name, class_name;
    Index n;
    double cond;
  };
  std::vector<Cell> cells;
  for (const auto& case_name : flags.cases) {
    for (const auto& class_name : flags.classes) {
      for (Index n : flags.sizes) {
        for (double cond : flags.conds) {
          cells.push_back({case_name, class_name, n, cond});
        }
      }
    }
  }

  json table = json::array();
  std::cout << std::left << std::setw(7) << "case" << std::setw(7) << "class" << std::setw(8)
            << "n" << std::setw(8) << "cond" << std::setw(6) << "reps" << std::setw(12)
            << "time_s" << std::setw(14) << "accuracy" << std::setw(10) << "matvecs"
            << "failures\n";

  for (const auto& cell : cells) {
    auto case_kind = case_from_string(cell.case_name);
    auto class_kind = class_from_string(cell.class_name);
    if (!case_kind || !class_kind) {
      throw std::runtime_error("unknown case/class in the sweep: " + cell.case_name + "/" +
                               cell.class_name);
    }

    auto run_instance = [&](int rep) -> BenchInstanceResult {
      BenchInstanceResult r;
      try {
        GenSpec spec;
        spec.n = cell.n;
        spec.density = flags.density;
        spec.cond = cell.cond;
        spec.case_kind = *case_kind;
        spec.class_kind = *class_kind;
        spec.seed = flags.seed + 7919ull * static_cast<std::uint64_t>(rep);
        GenArtifact art = generate(spec);

        const auto t0 = std::chrono::steady_clock::now();
        GtrsOutcome mine = solve(art.problem);
        r.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.solver_success = mine.success;
        r.matvecs = mine.matvecs;

        double best = mine.best_objective;
        if (cell.n <= flags.oracle_max_n) {
          oracle::OracleResult ref = oracle::dense_solve(art.problem);
          best = std::min(best, ref.outcome.best_objective);
        } else {
          SolverConfig pure;
          pure.use_interpolation = false;
          pure.use_primal_step = false;
          pure.kkt_termination = false;
          GtrsOutcome variant = solve(art.problem, pure);
          best = std::min(best, variant.best_objective);
        }
        r.accuracy = std::abs(oracle::accuracy(mine.best_objective, best));
      } catch (const std::exception& err) {
        r.failed = true;
        r.error = err.what();
      }
      return r;
    };

    // Instances run in worker slots; results land at their rep index, so the
    // output ordering does not depend on completion order.
    std::vector<BenchInstanceResult> results(static_cast<std::size_t>(flags.reps));
    if (flags.jobs > 1) {
      for (int start = 0; start < flags.reps; start += flags.jobs) {
        const int end = std::min(flags.reps, start + flags.jobs);
        std::vector<std::future<BenchInstanceResult>> futures;
        for (int rep = start; rep < end; ++rep) {
          futures.push_back(std::async(std::launch::async, run_instance, rep));
        }
        for (int rep = start; rep < end; ++rep) {
          results[static_cast<std::size_t>(rep)] = futures[static_cast<std::size_t>(rep - start)].get();
        }
      }
    } else {
      for (int rep = 0; rep < flags.reps; ++rep) {
        results[static_cast<std::size_t>(rep)] = run_instance(rep);
      }
    }

    double time_sum = 0.0, acc_max = 0.0;
    std::int64_t matvec_sum = 0;
    int failures = 0, ok = 0;
    for (const auto& r : results) {
      if (r.failed || !r.solver_success) {
        ++failures;
        continue;
      }
      ++ok;
      time_sum += r.time_s;
      acc_max = std::max(acc_max, r.accuracy);
      matvec_sum += r.matvecs;
    }
    const double time_mean = ok > 0 ? time_sum / ok : 0.0;
    const double matvec_mean = ok > 0 ? static_cast<double>(matvec_sum) / ok : 0.0;

    std::ostringstream acc_text;
    acc_text << std::scientific << std::setprecision(2) << acc_max;
    std::cout << std::left << std::setw(7) << cell.case_name << std::setw(7) << cell.class_name
              << std::setw(8) << cell.n << std::setw(8) << cell.cond << std::setw(6)
              << flags.reps << std::setw(12) << std::fixed << std::setprecision(4) << time_mean
              << std::setw(14) << acc_text.str() << std::setw(10) << std::setprecision(0)
              << matvec_mean << failures << "\n";

    table.push_back({{"case", cell.case_name},
                     {"class", cell.class_name},
                     {"n", cell.n},
                     {"cond", cell.cond},
                     {"reps", flags.reps},
                     {"time_mean_s", time_mean},
                     {"accuracy_max", acc_max},
                     {"matvecs_mean", matvec_mean},
                     {"failures", failures}});
  }

  if (!flags.out.empty()) {
    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error(flags.out + ": cannot open for writing");
    out << table.dump(2) << "\n";
  }
  return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free solver for quadratic programs with one quadratic constraint"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem bundle");
  BundleFlags solve_bundle;
  SolveFlags solve_flags;
  solve_bundle.attach(solve_cmd);
  solve_flags.attach(solve_cmd);

  auto* generate_cmd = app.add_subcommand("generate", "Generate a random problem bundle");
  GenerateFlags generate_flags;
  generate_flags.attach(generate_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark sweep");
  BenchFlags bench_flags;
  bench_flags.attach(bench_cmd);

  auto* oracle_cmd = app.add_subcommand("oracle", "Dense reference solve of a bundle");
  BundleFlags oracle_bundle;
  SolveFlags oracle_flags;
  oracle_bundle.attach(oracle_cmd);
  oracle_flags.attach(oracle_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(solve_bundle, solve_flags);
    if (generate_cmd->parsed()) return run_generate(generate_flags);
    if (bench_cmd->parsed()) return run_bench(bench_flags);
    if (oracle_cmd->parsed()) return run_oracle(oracle_bundle, oracle_flags);
  } catch (const SolveError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
