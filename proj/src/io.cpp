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

#include "deal/io.hpp"

#include <fstream>
#include <sstream>

#include "deal/errors.hpp"

namespace deal {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

Json qubo_to_json(const QuboInstance& q) {
  Json terms = Json::array();
  const auto& m = q.matrix();
  for (int i = 0; i < q.size(); ++i)
    for (int j = i; j < q.size(); ++j)
      if (m(i, j) != 0.0) terms.push_back({i, j, m(i, j)});
  Json out{{"n", q.size()}, {"q", terms}, {"offset", q.offset()}, {"label", q.label()}};
  if (const auto& opt = q.known_optimum()) {
    out["optimum"] = {{"bits", opt->bits}, {"energy", opt->energy}};
  } else {
    out["optimum"] = nullptr;
  }
  return out;
}

QuboInstance qubo_from_json(const Json& j) {
  const int n = field<int>(j, "n");
  if (n < 1) throw InvalidArgument("problem needs at least one variable");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& t : field<Json>(j, "q")) {
    if (!t.is_array() || t.size() != 3) throw InvalidArgument("QUBO terms must be [i, j, value]");
    const int a = t[0].get<int>(), b = t[1].get<int>();
    if (a < 0 || b < 0 || a >= n || b >= n) throw InvalidArgument("QUBO term index out of range");
    m(std::min(a, b), std::max(a, b)) += t[2].get<double>();
  }
  QuboInstance q(m, j.value("label", std::string{}), j.value("offset", 0.0));
  if (j.contains("optimum") && !j["optimum"].is_null()) {
    q.set_known_optimum({field<std::string>(j["optimum"], "bits"), field<double>(j["optimum"], "energy")});
  }
  return q;
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back({e.i, e.j, e.weight});
  return {{"nodes", g.node_count}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  Graph g{field<int>(j, "nodes"), {}};
  for (const auto& e : field<Json>(j, "edges")) {
    if (!e.is_array() || e.size() < 2) throw InvalidArgument("graph edges must be [i, j] or [i, j, weight]");
    g.edges.push_back({e[0].get<int>(), e[1].get<int>(), e.size() > 2 ? e[2].get<double>() : 1.0});
  }
  g.validate();
  return g;
}

Json circuit_to_json(const Circuit& c) {
  Json gates = Json::array();
  for (const auto& g : c.gates) {
    Json angle = has_angle(g.kind) ? Json(g.angle) : Json(nullptr);
    gates.push_back({{"gate", std::string(gate_name(g.kind))}, {"targets", g.targets}, {"angle", angle}});
  }
  return {{"qubits", c.n}, {"gates", gates}};
}

Circuit circuit_from_json(const Json& j) {
  Circuit c{field<int>(j, "qubits"), {}};
  for (const auto& g : field<Json>(j, "gates")) {
    Gate gate{gate_kind_from_name(field<std::string>(g, "gate")), field<std::vector<int>>(g, "targets"), 0.0};
    if (g.contains("angle") && !g["angle"].is_null()) gate.angle = g["angle"].get<double>();
    c.gates.push_back(std::move(gate));
  }
  c.validate();
  return c;
}

Json device_to_json(const CouplingMap& cm) {
  Json edges = Json::array();
  for (const auto& e : cm.edges) edges.push_back({e.a, e.b, e.error});
  return {{"qubits", cm.physical_count}, {"edges", edges}, {"readout", cm.readout_error}};
}

CouplingMap device_from_json(const Json& j) {
  CouplingMap cm;
  cm.physical_count = field<int>(j, "qubits");
  for (const auto& e : field<Json>(j, "edges")) {
    if (!e.is_array() || e.size() != 3) throw InvalidArgument("device edges must be [a, b, error]");
    cm.edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  if (j.contains("readout")) cm.readout_error = j["readout"].get<std::vector<double>>();
  cm.validate();
  return cm;
}

Json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); }

Eigen::VectorXd vector_from_json(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Json trace_to_json(const OptTrace& trace) {
  Json f = Json::array(), best = Json::array(), theta = Json::array();
  for (const auto& e : trace.entries) {
    f.push_back(e.f);
    best.push_back(e.best_f);
    theta.push_back(vector_to_json(e.theta));
  }
  return {{"f", f}, {"best_f", best}, {"theta", theta}, {"stop_reason", trace.stop_reason}};
}

Json zne_to_json(const ZneDiagnostics& d) {
  std::vector<double> scales, raw, variances;
  for (const auto& p : d.points) {
    scales.push_back(p.scale);
    raw.push_back(p.expectation);
    variances.push_back(p.variance);
  }
  Json pairs = Json::array();
  for (const auto& [a, b] : d.pairs) pairs.push_back({a, b});
  return {{"scales", scales},
          {"raw", raw},
          {"variances", variances},
          {"unmitigated", d.raw},
          {"extrapolated", d.extrapolated},
          {"effective_scales", d.effective_scales},
          {"pairs", pairs},
          {"lambda", d.lambda_folded},
          {"lambda_refined", vector_to_json(d.lambda_refined)},
          {"warnings", d.warnings}};
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) { write_text_atomic(path, j.dump(2) + "\n"); }

}  // namespace deal
