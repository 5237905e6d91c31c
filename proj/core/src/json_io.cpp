#include "sparse_pr/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sparse_pr {

using nlohmann::json;

namespace {

json value_json(Field field, Complex v) {
  if (field == Field::Real) return v.real();
  return json::array({v.real(), v.imag()});
}

}  // namespace

json index_set_json(const IndexSet& indices) {
  json out = json::array();
  for (int i : indices) out.push_back(i + 1);
  return out;
}

json to_json(const SparseVector& x) {
  json values = json::array();
  for (const auto& v : x.values()) values.push_back(value_json(x.field(), v));
  return {{"field", to_string(x.field())}, {"n", x.n()}, {"support", index_set_json(x.support())}, {"values", values}};
}

json to_json(const Witness& witness, int m) {
  json signs = json::array();
  const PhasePattern pattern = witness.pattern(m);
  for (const auto& p : pattern.phases()) signs.push_back(static_cast<int>(p.real()));
  return {{"I", index_set_json(witness.I)}, {"J", index_set_json(witness.J)}, {"P_bits", witness.sign_mask},
          {"P", signs}};
}

json to_json(const DistanceReport& report) {
  return {{"m", report.m},
          {"n", report.n},
          {"d", report.d},
          {"min_rank", report.min_rank},
          {"certified_k", report.certified_k()},
          {"witness", report.witness ? to_json(*report.witness, report.m) : json(nullptr)},
          {"overlap", to_string(report.overlap)},
          {"deficient", report.deficient},
          {"fragile", report.fragile},
          {"truncated", report.truncated},
          {"max_support", report.max_support},
          {"configurations_checked", report.configurations_checked}};
}

json to_json(const Certification& cert) {
  const auto& dist = cert.distance;
  json spark = {{"s", cert.spark.s},
                {"passed", cert.spark.passed},
                {"deficient_columns",
                 cert.spark.deficient_columns ? index_set_json(*cert.spark.deficient_columns) : json(nullptr)}};
  return {{"m", dist.m},
          {"n", dist.n},
          {"k", cert.k},
          {"d", dist.d},
          {"min_rank", dist.min_rank},
          {"certified", cert.certified},
          {"spark_ok", cert.spark_ok},
          {"witness", dist.witness ? to_json(*dist.witness, dist.m) : json(nullptr)},
          {"limiting_witness", cert.limiting_witness ? to_json(*cert.limiting_witness, dist.m) : json(nullptr)},
          {"spark", spark},
          {"fragile", cert.fragile}};
}

json to_json(const SolutionSet& solutions) {
  json classes = json::array();
  json residuals = json::array();
  for (const auto& c : solutions.classes) {
    json entry = to_json(c.x);
    entry["residual"] = c.residual;
    entry["method"] = std::string(to_string(c.method));
    entry["rank1_defect"] = c.rank1_defect;
    classes.push_back(std::move(entry));
    residuals.push_back(c.residual);
  }
  return {{"k_star", solutions.k_star ? json(*solutions.k_star) : json(nullptr)},
          {"unique", solutions.unique()},
          {"heuristic", solutions.heuristic},
          {"classes", classes},
          {"residuals", residuals},
          {"stats",
           {{"supports_tried", solutions.stats.supports_tried},
            {"patterns_tried", solutions.stats.patterns_tried},
            {"borderline", solutions.stats.borderline}}}};
}

json to_json(const CollisionPair& pair, const MeasurementEnsemble& A) {
  const auto ax = measure(A, pair.x);
  const auto az = measure(A, pair.z);
  double gap = 0.0;
  for (int i = 0; i < A.m(); ++i) gap = std::max(gap, std::abs(ax[i] - az[i]));
  return {{"x", to_json(pair.x)},
          {"z", to_json(pair.z)},
          {"I", index_set_json(pair.I)},
          {"J", index_set_json(pair.J)},
          {"measurements", ax.magnitudes()},
          {"max_gap", gap},
          {"phase_equivalent", phase_equivalent(pair.x, pair.z, 1e-6)}};
}

json to_json(const CollisionProbe& probe) {
  return {{"verdict", std::string(to_string(probe.verdict))},
          {"objective", probe.objective},
          {"restarts", probe.restarts},
          {"pairs_tried", probe.pairs_tried},
          {"u", probe.u ? to_json(*probe.u) : json(nullptr)},
          {"v", probe.v ? to_json(*probe.v) : json(nullptr)}};
}

json to_json(const UniquenessCheck& check) {
  json collision = nullptr;
  if (check.collision) {
    collision = {{"x", to_json(check.collision->x)},
                 {"z", to_json(check.collision->z)},
                 {"I", index_set_json(check.collision->I)},
                 {"J", index_set_json(check.collision->J)}};
  }
  return {{"k", check.k},
          {"d", check.d},
          {"certified", check.certified},
          {"forward_applicable", check.forward_applicable},
          {"forward_ok", check.forward_ok},
          {"forward_trials", check.forward_trials},
          {"forward_successes", check.forward_successes},
          {"converse_applicable", check.converse_applicable},
          {"converse_ok", check.converse_ok},
          {"collision", collision},
          {"witness_measurement_classes", check.witness_measurement_classes},
          {"details", check.details}};
}

json to_json(const SweepConfig& config) {
  return {{"field", to_string(config.field)},
          {"n", config.n},
          {"k", config.k},
          {"m_min", config.m_min},
          {"m_max", config.m_max},
          {"ensembles_per_m", config.ensembles_per_m},
          {"signals_per_ensemble", config.signals_per_ensemble},
          {"seed", config.seed},
          {"tol", config.tol},
          {"record_timing", config.record_timing}};
}

json to_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"m", row.m},
                    {"trials", row.trials},
                    {"successes", row.successes},
                    {"rate", row.rate},
                    {"mean_ms", row.mean_ms},
                    {"fragile", row.fragile},
                    {"heuristic", row.heuristic}});
  }
  return {{"config", to_json(result.config)}, {"fingerprint", result.config.fingerprint()}, {"rows", rows}};
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("sweep config must be a JSON object");
  static const std::set<std::string> known = {"field", "n", "k", "m_min", "m_max", "ensembles_per_m",
                                              "signals_per_ensemble", "seed", "tol", "record_timing"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw InvalidInput("sweep config: unknown key '" + key + "'");
  }
  SweepConfig config;
  try {
    if (j.contains("field")) config.field = parse_field(j.at("field").get<std::string>());
    if (j.contains("n")) config.n = j.at("n").get<int>();
    if (j.contains("k")) config.k = j.at("k").get<int>();
    if (j.contains("m_min")) config.m_min = j.at("m_min").get<int>();
    config.m_max = j.contains("m_max") ? j.at("m_max").get<int>() : config.m_min;
    if (j.contains("ensembles_per_m")) config.ensembles_per_m = j.at("ensembles_per_m").get<int>();
    if (j.contains("signals_per_ensemble")) config.signals_per_ensemble = j.at("signals_per_ensemble").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tol")) config.tol = j.at("tol").get<double>();
    if (j.contains("record_timing")) config.record_timing = j.at("record_timing").get<bool>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep config: ") + e.what());
  }
  config.validate();
  return config;
}

SweepResult sweep_result_from_json(const json& j) {
  SweepResult result;
  try {
    result.config = sweep_config_from_json(j.at("config"));
    for (const auto& r : j.at("rows")) {
      SweepRow row;
      row.m = r.at("m").get<int>();
      row.trials = r.at("trials").get<int>();
      row.successes = r.at("successes").get<int>();
      row.rate = r.at("rate").get<double>();
      row.mean_ms = r.at("mean_ms").get<double>();
      row.fragile = r.at("fragile").get<int>();
      row.heuristic = r.value("heuristic", false);
      result.rows.push_back(row);
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep result: ") + e.what());
  }
  return result;
}

}  // namespace sparse_pr
