#include "sparse_pr/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sparse_pr/combinatorics.hpp"
#include "sparse_pr/json_io.hpp"
#include "sparse_pr/numerics.hpp"
#include "sparse_pr/parallel.hpp"
#include "sparse_pr/rng.hpp"
#include "sparse_pr/solver_complex.hpp"
#include "sparse_pr/solver_real.hpp"

namespace sparse_pr {

namespace {

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buffer, ptr);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

SolutionSet solve_for_field(const MeasurementEnsemble& A, const MeasurementVector& y, int k, double tol,
                            std::uint64_t seed, bool& heuristic) {
  if (A.field() == Field::Real) {
    RealSolverOptions options;
    options.tol = tol;
    options.workers = 1;
    return solve_l0_real(A, y, k, options);
  }
  ComplexSolverOptions options;
  options.tol = tol;
  options.workers = 1;
  options.seed = seed;
  options.allow_heuristic = k * k > A.m();
  heuristic = options.allow_heuristic;
  return solve_l0_complex(A, y, k, options);
}

bool genuine_pair(const MeasurementEnsemble& A, const SparseVector& x, const SparseVector& z) {
  if (x.sparsity() == 0 || z.sparsity() == 0) return false;
  const auto ax = measure(A, x);
  const auto az = measure(A, z);
  double gap = 0.0;
  for (int i = 0; i < A.m(); ++i) gap = std::max(gap, std::abs(ax[i] - az[i]));
  return gap <= 1e-10 * std::max(ax.max_abs(), 1e-300) && !phase_equivalent(x, z, 1e-6);
}

/// Split a null vector of [A_I, P A_J] into (x on I, z on J); then
/// A x = -P A z and |Ax| = |Az|.
std::pair<SparseVector, SparseVector> split_null_vector(const Eigen::VectorXd& v, const IndexSet& I,
                                                        const IndexSet& J, int n) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  for (std::size_t t = 0; t < I.size(); ++t) x(I[t]) = v(static_cast<Eigen::Index>(t));
  for (std::size_t t = 0; t < J.size(); ++t) z(J[t]) = v(static_cast<Eigen::Index>(I.size() + t));
  return {SparseVector::from_dense(x, 1e-12), SparseVector::from_dense(z, 1e-12)};
}

}  // namespace

// ---------------------------------------------------------------------------

void SweepConfig::validate() const {
  if (n < 1 || k < 1) throw InvalidInput("sweep: n and k must be >= 1");
  if (m_min < 1 || m_max < m_min) throw InvalidInput("sweep: need 1 <= m_min <= m_max");
  if (k > m_min || k > n) throw InvalidInput("sweep: k must not exceed any m in range or n");
  if (ensembles_per_m < 1 || signals_per_ensemble < 1) throw InvalidInput("sweep: trial counts must be >= 1");
  if (!(tol > 0.0)) throw InvalidInput("sweep: tol must be positive");
}

std::string SweepConfig::fingerprint() const {
  const std::uint64_t hash = fnv1a(to_json(*this).dump());
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

SparseVector random_sparse_signal(Field field, int n, int k, std::uint64_t seed) {
  if (k < 0 || k > n) throw InvalidInput("random_sparse_signal: k must lie in [0, n]");
  Rng rng(seed);
  std::vector<int> pool(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (int t = 0; t < k; ++t) {
    const auto pick = static_cast<std::size_t>(t) + rng.index(static_cast<std::uint64_t>(n - t));
    std::swap(pool[static_cast<std::size_t>(t)], pool[pick]);
  }
  IndexSet support(pool.begin(), pool.begin() + k);
  std::sort(support.begin(), support.end());
  std::vector<Complex> values(static_cast<std::size_t>(k));
  for (auto& v : values) {
    do {
      v = field == Field::Real ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    } while (std::abs(v) < 0.1);
  }
  return SparseVector(field, n, std::move(support), std::move(values));
}

bool recovery_succeeds(const SolutionSet& solutions, const SparseVector& truth, double tol) {
  if (!solutions.unique()) return false;
  return phase_equivalent(solutions.classes.front().x, truth, tol * std::max(1.0, truth.max_abs()));
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;
  const int trials = config.trials_per_m();

  for (int m = config.m_min; m <= config.m_max; ++m) {
    struct Trial {
      bool success = false;
      bool fragile = false;
      bool heuristic = false;
      double ms = 0.0;
    };
    std::vector<Trial> outcomes(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
      const auto ensemble_index = static_cast<std::uint64_t>(t) / static_cast<std::uint64_t>(config.signals_per_ensemble);
      const auto signal_index = static_cast<std::uint64_t>(t) % static_cast<std::uint64_t>(config.signals_per_ensemble);
      const std::uint64_t ensemble_seed = derive_seed(config.seed, static_cast<std::uint64_t>(m), ensemble_index);
      const std::uint64_t signal_seed = derive_seed(ensemble_seed, signal_index, kSignalStream);
      const auto A = generate_ensemble(config.field, m, config.n, ensemble_seed);
      const auto x = random_sparse_signal(config.field, config.n, config.k, signal_seed);
      const auto y = measure(A, x);

      Trial& trial = outcomes[t];
      const auto start = std::chrono::steady_clock::now();
      const auto solutions = solve_for_field(A, y, config.k, config.tol, signal_seed, trial.heuristic);
      const auto stop = std::chrono::steady_clock::now();
      trial.ms = std::chrono::duration<double, std::milli>(stop - start).count();
      trial.success = recovery_succeeds(solutions, x, config.tol);
      trial.fragile = solutions.stats.borderline > 0;
    });

    SweepRow row;
    row.m = m;
    row.trials = trials;
    double total_ms = 0.0;
    for (const auto& trial : outcomes) {
      row.successes += trial.success ? 1 : 0;
      row.fragile += trial.fragile ? 1 : 0;
      row.heuristic = row.heuristic || trial.heuristic;
      total_ms += trial.ms;
    }
    row.rate = static_cast<double>(row.successes) / static_cast<double>(row.trials);
    row.mean_ms = config.record_timing ? total_ms / static_cast<double>(row.trials) : 0.0;
    result.rows.push_back(row);
  }
  return result;
}

// ---------------------------------------------------------------------------

CollisionPair build_collision_real(const MeasurementEnsemble& A, int k) {
  if (A.field() != Field::Real) throw InvalidInput("build_collision_real: ensemble is complex");
  if (k < 1) throw InvalidInput("build_collision_real: k must be >= 1");
  if (A.m() > 2 * k - 1) throw InvalidInput("build_collision_real: needs m <= 2k - 1");
  if (2 * k > A.n()) throw InvalidInput("build_collision_real: needs 2k <= n for disjoint supports");

  const Eigen::MatrixXd& real = A.real_entries();
  const auto supports = combinations(A.n(), k);
  for (const auto& I : supports) {
    for (const auto& J : supports) {
      if (!set_intersection(I, J).empty() || J < I) continue;
      Eigen::MatrixXd M(A.m(), 2 * k);
      for (int t = 0; t < k; ++t) {
        M.col(t) = real.col(I[static_cast<std::size_t>(t)]);
        M.col(k + t) = -real.col(J[static_cast<std::size_t>(t)]);
      }
      Eigen::VectorXd v = null_space_vector(M);
      if (v.cwiseAbs().minCoeff() <= 1e-9) continue;  // some block is not genuinely k-sparse
      if (v(0) < 0.0) v = -v;
      std::vector<Complex> xs(static_cast<std::size_t>(k));
      std::vector<Complex> zs(static_cast<std::size_t>(k));
      for (int t = 0; t < k; ++t) {
        xs[static_cast<std::size_t>(t)] = v(t);
        zs[static_cast<std::size_t>(t)] = v(k + t);
      }
      return {SparseVector(Field::Real, A.n(), I, std::move(xs)), SparseVector(Field::Real, A.n(), J, std::move(zs)),
              I, J};
    }
  }
  throw InvalidInput("build_collision_real: every disjoint support pair gave a degenerate null vector");
}

std::optional<CollisionPair> search_collision_real(const MeasurementEnsemble& A, int k) {
  if (A.field() != Field::Real) throw InvalidInput("search_collision_real: ensemble is complex");
  if (k < 1) throw InvalidInput("search_collision_real: k must be >= 1");
  std::vector<IndexSet> subsets;
  for (int size = 1; size <= std::min(k, A.n()); ++size) {
    auto part = combinations(A.n(), size);
    subsets.insert(subsets.end(), part.begin(), part.end());
  }
  std::sort(subsets.begin(), subsets.end());
  const std::uint64_t patterns = std::uint64_t{1} << (A.m() - 1);
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a; b < subsets.size(); ++b) {
      const IndexSet& I = subsets[a];
      const IndexSet& J = subsets[b];
      for (std::uint64_t code = 0; code < patterns; ++code) {
        const auto v = configuration_collision(A, I, J, PhasePattern::from_sign_mask(A.m(), code << 1));
        if (!v) continue;
        auto [x, z] = split_null_vector(*v, I, J, A.n());
        if (genuine_pair(A, x, z)) return CollisionPair{std::move(x), std::move(z), I, J};
      }
    }
  }
  return std::nullopt;
}

UniquenessCheck uniqueness_bidirectional_check(const MeasurementEnsemble& A, int k, int trials, std::uint64_t seed) {
  UniquenessCheck check;
  check.k = k;
  const Certification cert = certify_unique(A, k);
  check.d = cert.distance.d;
  check.certified = cert.certified;
  std::ostringstream details;
  details << "d=" << check.d << " bound=" << cert.distance.certified_k() << " spark_ok=" << cert.spark_ok << "; ";

  check.forward_applicable = cert.certified;
  check.forward_ok = true;
  if (check.forward_applicable) {
    for (int t = 0; t < trials; ++t) {
      const auto x = random_sparse_signal(Field::Real, A.n(), k,
                                          derive_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(t)));
      const auto solutions = solve_l0_real(A, measure(A, x), k);
      ++check.forward_trials;
      if (recovery_succeeds(solutions, x, 1e-8)) ++check.forward_successes;
    }
    check.forward_ok = check.forward_successes == check.forward_trials;
    details << "forward " << check.forward_successes << "/" << check.forward_trials << "; ";
  }

  check.converse_applicable = k > cert.distance.certified_k();
  check.converse_ok = true;
  if (!check.converse_applicable) {
    check.details = details.str();
    return check;
  }

  // (a) disjoint-support collision by rank-nullity.
  if (A.m() <= 2 * k - 1 && 2 * k <= A.n()) {
    try {
      auto pair = build_collision_real(A, k);
      if (genuine_pair(A, pair.x, pair.z)) {
        check.collision = std::move(pair);
        details << "collision from disjoint supports; ";
      }
    } catch (const InvalidInput& e) {
      details << "disjoint collision failed (" << e.what() << "); ";
    }
  }

  // (b) measurement built from the distance witness.
  if (cert.distance.deficient && cert.distance.witness) {
    const Witness& w = *cert.distance.witness;
    if (const auto v = configuration_collision(A, w.I, w.J, w.pattern(A.m()))) {
      auto [x, z] = split_null_vector(*v, w.I, w.J, A.n());
      if (x.sparsity() > 0 && x.sparsity() <= k) {
        const auto solutions = solve_l0_real(A, measure(A, x), k);
        check.witness_measurement_classes = static_cast<int>(solutions.classes.size());
        details << "witness measurement gave " << check.witness_measurement_classes << " class(es); ";
      }
      if (!check.collision && x.sparsity() <= k && z.sparsity() <= k && genuine_pair(A, x, z)) {
        check.collision = CollisionPair{std::move(x), std::move(z), w.I, w.J};
        details << "collision from distance witness; ";
      }
    }
  }

  // (c) exhaustive search over all small configurations.
  if (!check.collision && check.witness_measurement_classes < 2) {
    check.collision = search_collision_real(A, k);
    details << "exhaustive search: " << (check.collision ? "collision found" : "no collision among k-sparse pairs")
            << "; ";
  }

  check.converse_ok = check.collision.has_value() || check.witness_measurement_classes >= 2;
  check.details = details.str();
  return check;
}

// ---------------------------------------------------------------------------

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "gnuplot") return OutputFormat::Gnuplot;
  throw InvalidInput("unknown output format '" + std::string(text) + "' (expected csv, json or gnuplot)");
}

std::string_view file_extension(OutputFormat format) noexcept {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Gnuplot: return "dat";
  }
  return "txt";
}

std::string emit_results(const SweepResult& result, OutputFormat format) {
  std::ostringstream out;
  if (format == OutputFormat::Json) {
    out << to_json(result).dump(2) << '\n';
    return out.str();
  }
  const char sep = format == OutputFormat::Csv ? ',' : ' ';
  if (format == OutputFormat::Gnuplot) {
    out << "# sparse_pr recovery sweep\n";
    out << "# config: " << to_json(result.config).dump() << '\n';
    out << "# fingerprint: " << result.config.fingerprint() << '\n';
    for (const auto& row : result.rows) {
      if (row.heuristic) out << "# m=" << row.m << " solved heuristically\n";
    }
    out << "# ";
  }
  out << "m" << sep << "trials" << sep << "successes" << sep << "rate" << sep << "mean_ms" << sep << "fragile\n";
  for (const auto& row : result.rows) {
    out << row.m << sep << row.trials << sep << row.successes << sep << format_number(row.rate) << sep
        << format_number(row.mean_ms) << sep << row.fragile << '\n';
  }
  return out.str();
}

std::filesystem::path write_results(const SweepResult& result, OutputFormat format,
                                    const std::filesystem::path& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create results directory " + directory.string() + ": " + ec.message());
  const auto path = directory / ("sweep_" + result.config.fingerprint() + "." + std::string(file_extension(format)));
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << emit_results(result, format);
  if (!file) throw std::runtime_error("write failed for " + path.string());
  return path;
}

std::vector<SweepRow> parse_result_rows(std::string_view text) {
  std::vector<SweepRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#' || line.rfind("m,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    SweepRow row;
    if (!(fields >> row.m >> row.trials >> row.successes >> row.rate >> row.mean_ms >> row.fragile)) {
      throw InvalidInput("result line " + std::to_string(line_no) + ": expected 6 fields");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sparse_pr
