#pragma once

#include <nlohmann/json.hpp>

#include "sparse_pr/distance.hpp"
#include "sparse_pr/experiments.hpp"
#include "sparse_pr/model.hpp"
#include "sparse_pr/solution.hpp"
#include "sparse_pr/solver_complex.hpp"

namespace sparse_pr {

// JSON views of the library's results. Indices are one-based; complex
// numbers are [re, im] pairs.

nlohmann::json index_set_json(const IndexSet& indices);
nlohmann::json to_json(const SparseVector& x);
nlohmann::json to_json(const Witness& witness, int m);
nlohmann::json to_json(const DistanceReport& report);
nlohmann::json to_json(const Certification& cert);
nlohmann::json to_json(const SolutionSet& solutions);
nlohmann::json to_json(const CollisionPair& pair, const MeasurementEnsemble& A);
nlohmann::json to_json(const CollisionProbe& probe);
nlohmann::json to_json(const UniquenessCheck& check);
nlohmann::json to_json(const SweepConfig& config);
nlohmann::json to_json(const SweepResult& result);

/// Missing keys keep their defaults; unknown keys and bad types raise
/// InvalidInput.
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepResult sweep_result_from_json(const nlohmann::json& j);

}  // namespace sparse_pr
