#include "sparse_pr_cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "sparse_pr/experiments.hpp"
#include "sparse_pr/json_io.hpp"
#include "sparse_pr/solver_complex.hpp"
#include "sparse_pr/solver_real.hpp"
#include "sparse_pr/text_io.hpp"

namespace sparse_pr::cli {

namespace {

struct Globals {
  bool no_log = false;
  bool strict = false;
};

void log_line(std::ostream& err, const Globals& globals, const std::string& subcommand) {
  if (globals.no_log) return;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  err << "[" << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << "] sparse_pr " << subcommand << '\n';
}

void print_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

/// Writes to `path`, or to `out` when the path is empty or "-".
template <typename Fn>
void emit(std::ostream& out, const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw std::runtime_error("write failed for '" + path + "'");
}

int fragile_exit(const Globals& globals, bool fragile, int otherwise) {
  return globals.strict && fragile ? kFragile : otherwise;
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::string field = "real";
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::string output;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  const auto A = generate_ensemble(parse_field(a.field), a.m, a.n, a.seed);
  emit(out, a.output, [&](std::ostream& os) { write_matrix(os, A); });
  return kOk;
}

// --- measure -----------------------------------------------------------------

struct MeasureArgs {
  std::string matrix;
  std::string vector;
  std::string output;
};

int run_measure(const MeasureArgs& a, std::ostream& out) {
  const auto A = load_matrix(a.matrix);
  const auto x = load_sparse_vector(a.vector, A.field());
  if (x.n() != A.n()) {
    throw InvalidInput("vector has n = " + std::to_string(x.n()) + " but matrix has n = " + std::to_string(A.n()));
  }
  const auto y = measure(A, x);
  emit(out, a.output, [&](std::ostream& os) { write_measurements(os, y); });
  return kOk;
}

// --- dist / certify ----------------------------------------------------------

struct DistArgs {
  std::string matrix;
  std::optional<int> max_support;
  int k = 1;
};

DistanceOptions distance_options(const DistArgs& a) {
  DistanceOptions options;
  options.max_support = a.max_support;
  return options;
}

int run_dist(const DistArgs& a, const Globals& globals, std::ostream& out) {
  const auto report = phase_gen_min_distance(load_matrix(a.matrix), distance_options(a));
  print_json(out, to_json(report));
  return fragile_exit(globals, report.fragile, kOk);
}

int run_certify(const DistArgs& a, const Globals& globals, std::ostream& out) {
  const auto cert = certify_unique(load_matrix(a.matrix), a.k, distance_options(a));
  print_json(out, to_json(cert));
  return fragile_exit(globals, cert.fragile, cert.certified ? kOk : kNegative);
}

// --- solve -------------------------------------------------------------------

struct SolveArgs {
  std::string matrix;
  std::string measurements;
  std::string inline_y;
  int k_max = 1;
  double tol = 1e-8;
  bool heuristic = false;
  std::uint64_t seed = 0;
};

int run_solve(const SolveArgs& a, std::ostream& out) {
  const auto A = load_matrix(a.matrix);
  if (a.measurements.empty() == a.inline_y.empty()) {
    throw InvalidInput("give the measurements exactly once, as a file or with --y");
  }
  const auto y = a.inline_y.empty() ? load_measurements(a.measurements) : parse_measurements_inline(a.inline_y);
  if (y.m() != A.m()) {
    throw InvalidInput("y has length " + std::to_string(y.m()) + " but the matrix has m = " + std::to_string(A.m()));
  }
  SolutionSet solutions;
  if (A.field() == Field::Real) {
    RealSolverOptions options;
    options.tol = a.tol;
    solutions = solve_l0_real(A, y, a.k_max, options);
  } else {
    ComplexSolverOptions options;
    options.tol = a.tol;
    options.allow_heuristic = a.heuristic;
    options.seed = a.seed;
    solutions = solve_l0_complex(A, y, a.k_max, options);
  }
  print_json(out, to_json(solutions));
  return kOk;
}

// --- collide -----------------------------------------------------------------

struct CollideArgs {
  std::string matrix;
  int k = 1;
  int restarts = 20;
  std::uint64_t seed = 0;
};

int run_collide(const CollideArgs& a, std::ostream& out) {
  const auto A = load_matrix(a.matrix);
  if (A.field() == Field::Complex) {
    const auto probe = collision_probe_complex(A, a.k, a.restarts, a.seed);
    print_json(out, to_json(probe));
    return probe.verdict == ProbeVerdict::CollisionFound ? kNegative : kOk;
  }
  std::optional<CollisionPair> pair;
  std::string method;
  if (A.m() <= 2 * a.k - 1 && 2 * a.k <= A.n()) {
    pair = build_collision_real(A, a.k);
    method = "disjoint";
  } else {
    pair = search_collision_real(A, a.k);
    method = "exhaustive";
  }
  nlohmann::json j = {{"k", a.k}, {"method", method}, {"found", pair.has_value()}};
  j["collision"] = pair ? to_json(*pair, A) : nlohmann::json(nullptr);
  print_json(out, j);
  return pair ? kNegative : kOk;
}

// --- sweep -------------------------------------------------------------------

struct SweepArgs {
  std::string config_path;
  std::optional<std::string> field;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> m_min;
  std::optional<int> m_max;
  std::optional<int> ensembles;
  std::optional<int> signals;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool timing = false;
  std::string format = "csv";
  std::string out_dir = "results";
  bool print = false;
};

SweepConfig sweep_config(const SweepArgs& a) {
  nlohmann::json j = nlohmann::json::object();
  if (!a.config_path.empty()) {
    std::ifstream file(a.config_path);
    if (!file) throw InvalidInput("cannot open '" + a.config_path + "'");
    try {
      j = nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInput(a.config_path + ": " + e.what());
    }
  }
  if (a.field) j["field"] = *a.field;
  if (a.n) j["n"] = *a.n;
  if (a.k) j["k"] = *a.k;
  if (a.m_min) j["m_min"] = *a.m_min;
  if (a.m_max) j["m_max"] = *a.m_max;
  if (a.ensembles) j["ensembles_per_m"] = *a.ensembles;
  if (a.signals) j["signals_per_ensemble"] = *a.signals;
  if (a.seed) j["seed"] = *a.seed;
  if (a.tol) j["tol"] = *a.tol;
  if (a.timing) j["record_timing"] = true;
  return sweep_config_from_json(j);
}

int run_sweep_command(const SweepArgs& a, std::ostream& out) {
  const auto format = parse_output_format(a.format);
  const auto result = run_sweep(sweep_config(a));
  if (a.print) {
    out << emit_results(result, format);
    return kOk;
  }
  const auto path = write_results(result, format, a.out_dir);
  nlohmann::json j = to_json(result);
  j["path"] = path.generic_string();
  print_json(out, j);
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uniqueness certificates and exact recovery for sparse phase retrieval", "sparse_pr"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_flag("--no-log", globals.no_log, "Suppress the timestamped log line on stderr");
  app.add_flag("--strict", globals.strict, "Exit with 3 when a rank decision was fragile");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded Gaussian measurement matrix");
  gen_cmd->add_option("--field", gen.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  gen_cmd->add_option("--m", gen.m, "Rows")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--n", gen.n, "Columns")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default: stdout)");

  MeasureArgs meas;
  auto* measure_cmd = app.add_subcommand("measure", "Print |Ax| for a matrix and a sparse vector");
  measure_cmd->add_option("matrix", meas.matrix, "Matrix file")->required();
  measure_cmd->add_option("vector", meas.vector, "Sparse vector file")->required();
  measure_cmd->add_option("-o,--output", meas.output, "Output file (default: stdout)");

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "Phase-generalized minimum distance report (JSON)");
  dist_cmd->add_option("matrix", dist.matrix, "Matrix file")->required();
  dist_cmd->add_option("--max-support", dist.max_support, "Bound on |I| and |J|")->check(CLI::PositiveNumber);

  DistArgs cert;
  auto* certify_cmd = app.add_subcommand("certify", "Certify unique recovery of every k-sparse vector");
  certify_cmd->add_option("matrix", cert.matrix, "Matrix file")->required();
  certify_cmd->add_option("--k", cert.k, "Sparsity")->required()->check(CLI::PositiveNumber);
  certify_cmd->add_option("--max-support", cert.max_support, "Bound on |I| and |J|")->check(CLI::PositiveNumber);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Exact l0 recovery from magnitudes (JSON)");
  solve_cmd->add_option("matrix", solve.matrix, "Matrix file")->required();
  solve_cmd->add_option("measurements", solve.measurements, "Magnitude file, one value per line");
  solve_cmd->add_option("--y", solve.inline_y, "Magnitudes inline, comma separated");
  solve_cmd->add_option("--kmax", solve.k_max, "Largest sparsity searched")->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--tol", solve.tol, "Residual tolerance relative to max y")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--heuristic", solve.heuristic, "Complex only: allow Gauss-Newton search when m < k^2");
  solve_cmd->add_option("--seed", solve.seed, "Seed for heuristic restarts");

  CollideArgs collide;
  auto* collide_cmd = app.add_subcommand("collide", "Find two k-sparse vectors with equal magnitudes");
  collide_cmd->add_option("matrix", collide.matrix, "Matrix file")->required();
  collide_cmd->add_option("--k", collide.k, "Sparsity")->required()->check(CLI::PositiveNumber);
  collide_cmd->add_option("--restarts", collide.restarts, "Complex probe restarts per support pair")
      ->check(CLI::PositiveNumber);
  collide_cmd->add_option("--seed", collide.seed, "Complex probe seed");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Recovery-rate sweep over m");
  sweep_cmd->add_option("config", sweep.config_path, "JSON config file; flags override its keys");
  sweep_cmd->add_option("--field", sweep.field, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  sweep_cmd->add_option("--n", sweep.n, "Signal length");
  sweep_cmd->add_option("--k", sweep.k, "Sparsity");
  sweep_cmd->add_option("--m-min", sweep.m_min, "Smallest m");
  sweep_cmd->add_option("--m-max", sweep.m_max, "Largest m");
  sweep_cmd->add_option("--ensembles", sweep.ensembles, "Matrices per m");
  sweep_cmd->add_option("--signals", sweep.signals, "Signals per matrix");
  sweep_cmd->add_option("--seed", sweep.seed, "Base seed");
  sweep_cmd->add_option("--tol", sweep.tol, "Solver tolerance");
  sweep_cmd->add_flag("--timing", sweep.timing, "Record mean solve time (output is no longer reproducible)");
  sweep_cmd->add_option("--format", sweep.format, "csv, json or gnuplot")
      ->check(CLI::IsMember({"csv", "json", "gnuplot"}));
  sweep_cmd->add_option("--out-dir", sweep.out_dir, "Results directory");
  sweep_cmd->add_flag("--print", sweep.print, "Print the data to stdout instead of writing a file");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("sparse_pr");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; CLI11 prints them to `out` and errors to `err`.
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  log_line(err, globals, app.get_subcommands().front()->get_name());
  try {
    if (*gen_cmd) return run_gen(gen, out);
    if (*measure_cmd) return run_measure(meas, out);
    if (*dist_cmd) return run_dist(dist, globals, out);
    if (*certify_cmd) return run_certify(cert, globals, out);
    if (*solve_cmd) return run_solve(solve, out);
    if (*collide_cmd) return run_collide(collide, out);
    if (*sweep_cmd) return run_sweep_command(sweep, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace sparse_pr::cli
