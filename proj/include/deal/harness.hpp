// Copyright 2026 The DEAL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEAL_HARNESS_HPP
#define DEAL_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deal/ansatz.hpp"
#include "deal/io.hpp"
#include "deal/mapping.hpp"
#include "deal/optimize.hpp"
#include "deal/zne.hpp"

namespace deal {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct ProblemConfig {
  std::string type = "maxcut";  ///< maxcut | tsp | knapsack
  int size = 4;                 ///< nodes, cities or items
  std::string graph = "complete";  ///< complete | erdos-renyi (maxcut)
  double edge_prob = 0.5;
  std::uint64_t seed = 1;
  int capacity = 7;      ///< knapsack
  double penalty = 0.0;  ///< 0 picks a safe default
  bool vary_instance = true;  ///< random instances change with the repeat index
  std::string file;           ///< load a stored instance instead of generating one

  void validate() const;
  static ProblemConfig from_json(const Json& j);
  Json to_json() const;
};

struct GeneratedProblem {
  QuboInstance qubo;
  Json source;  ///< graph, distances or item data behind the QUBO
};

/// Builds the instance for `instance_seed`. Erdos-Renyi draws with no edge are
/// redrawn with derived seeds.
GeneratedProblem generate_problem(const ProblemConfig& config, std::uint64_t instance_seed);

/// Qubit requirement of the configured encoding.
int required_qubits(const ProblemConfig& config);

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<AnsatzStyle> methods{AnsatzStyle::Deal, AnsatzStyle::Vanilla};
  std::string init = "qpn";  ///< qpn | random
  std::string init_state = "plus";  ///< plus | one-hot (TSP identity tour as a basis state)
  double mixer_floor = 0.0;
  int depth_min = 1;
  int depth_max = 1;
  int repeats = 1;
  int batch = 1;  ///< final-distribution sampling batches per record
  std::int64_t shots = 1024;
  bool exact = false;
  NoiseModel noise;
  int trajectories = 64;
  std::optional<ZneConfig> zne;
  OptimizerConfig optimizer;
  std::string device;  ///< preset name or device JSON path; empty for none
  std::uint64_t seed = 0;
  std::int64_t final_shots = 4096;
  int scan_size = 50;
  int noise_repeats = 16;
  int jobs = 1;

  void validate() const;
  /// Relative paths are resolved against `base`.
  static ExperimentConfig from_json(const Json& j, const std::filesystem::path& base = {});
  Json to_json() const;
};

struct CellKey {
  AnsatzStyle method = AnsatzStyle::Deal;
  int depth = 1;
  int repeat = 0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// Stable per-cell seed: a function of (master, method, depth, repeat) only.
std::uint64_t cell_seed(std::uint64_t master, const CellKey& key);

std::string record_filename(const CellKey& key);

/// Full pipeline for one cell. The returned record has a "wall_clock_seconds"
/// field; every other field is a deterministic function of the config.
Json run_cell(const ExperimentConfig& config, const CellKey& key);

std::vector<CellKey> experiment_cells(const ExperimentConfig& config);

/// Runs every cell (in `config.jobs` threads), writes out/records/*.json as
/// cells finish and out/summary.csv at the end. Returns records in cell order.
std::vector<Json> run_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

std::string summary_csv(const std::vector<Json>& records);

/// Record files named directly or found under directories (recursively).
std::vector<std::pair<std::filesystem::path, Json>> load_records(const std::vector<std::filesystem::path>& inputs);

/// Per-cell mean/std, CDF and KL-vs-depth series, convergence traces,
/// energy scans and the DEAL - VANILLA success difference per depth.
Json aggregate_records(const std::vector<std::pair<std::filesystem::path, Json>>& records);

std::string aggregate_csv(const Json& aggregate);

/// Human-readable summary of a problem, device, config or record document.
std::string inspect_document(const Json& j);

}  // namespace deal

#endif  // DEAL_HARNESS_HPP
