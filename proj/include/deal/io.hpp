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

#ifndef DEAL_IO_HPP
#define DEAL_IO_HPP

#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "deal/mapping.hpp"
#include "deal/optimize.hpp"
#include "deal/problems.hpp"
#include "deal/simulator.hpp"
#include "deal/zne.hpp"

namespace deal {

using Json = nlohmann::json;

// Problem: {"n", "q": [[i, j, v], ...], "offset", "label", "optimum": {"bits", "energy"} | null}
Json qubo_to_json(const QuboInstance& q);
QuboInstance qubo_from_json(const Json& j);

// Graph: {"nodes", "edges": [[i, j, w], ...]}
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// Circuit: {"qubits", "gates": [{"gate", "targets", "angle"}]}
Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

// Device: {"qubits", "edges": [[a, b, err], ...], "readout": [...]}
Json device_to_json(const CouplingMap& cm);
CouplingMap device_from_json(const Json& j);

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

Json trace_to_json(const OptTrace& trace);
Json zne_to_json(const ZneDiagnostics& d);

Json read_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json_atomic(const std::filesystem::path& path, const Json& j);

}  // namespace deal

#endif  // DEAL_IO_HPP
