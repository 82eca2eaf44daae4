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

#include "deal/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "deal/errors.hpp"
#include "deal/metrics.hpp"
#include "deal/qpn.hpp"
#include "deal/random.hpp"

namespace deal {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Problems

void ProblemConfig::validate() const {
  if (!file.empty()) return;
  if (type != "maxcut" && type != "tsp" && type != "knapsack") {
    throw InvalidArgument("unknown problem type '" + type + "'");
  }
  if (type == "maxcut") {
    if (size < 2) throw InvalidArgument("MaxCut needs at least two nodes");
    if (graph != "complete" && graph != "erdos-renyi") throw InvalidArgument("unknown graph kind '" + graph + "'");
    if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw InvalidArgument("edge_prob must lie in (0, 1]");
  }
  if (type == "tsp" && size < 2) throw InvalidArgument("TSP needs at least two cities");
  if (type == "knapsack") {
    if (size < 1) throw InvalidArgument("knapsack needs at least one item");
    if (capacity < 1) throw InvalidArgument("knapsack capacity must be positive");
  }
  if (penalty < 0.0) throw InvalidArgument("penalty must be non-negative");
}

ProblemConfig ProblemConfig::from_json(const Json& j) {
  ProblemConfig c;
  c.type = j.value("type", c.type);
  c.size = j.value("size", c.size);
  c.graph = j.value("graph", c.graph);
  if (c.graph == "erdos_renyi" || c.graph == "er") c.graph = "erdos-renyi";
  c.edge_prob = j.value("edge_prob", c.edge_prob);
  c.seed = j.value("seed", c.seed);
  c.capacity = j.value("capacity", c.capacity);
  c.penalty = j.value("penalty", c.penalty);
  c.vary_instance = j.value("vary_instance", c.vary_instance);
  c.file = j.value("file", c.file);
  c.validate();
  return c;
}

Json ProblemConfig::to_json() const {
  return {{"type", type},       {"size", size},       {"graph", graph},     {"edge_prob", edge_prob},
          {"seed", seed},       {"capacity", capacity}, {"penalty", penalty}, {"vary_instance", vary_instance},
          {"file", file}};
}

GeneratedProblem generate_problem(const ProblemConfig& config, std::uint64_t instance_seed) {
  config.validate();
  if (!config.file.empty()) {
    const Json j = read_json(config.file);
    return {qubo_from_json(j.contains("problem") ? j["problem"] : j), j.value("source", Json(nullptr))};
  }
  if (config.type == "maxcut") {
    Graph g;
    if (config.graph == "complete") {
      g = complete_graph(config.size);
    } else {
      for (std::uint64_t attempt = 0;; ++attempt) {
        g = erdos_renyi(config.size, config.edge_prob, attempt == 0 ? instance_seed : derive_seed(instance_seed, attempt));
        if (!g.edges.empty()) break;
        if (attempt > 10000) throw InvalidArgument("could not draw a graph with at least one edge");
      }
    }
    auto q = maxcut_qubo(g);
    q.set_label("maxcut-" + std::to_string(config.size));
    return {std::move(q), Json{{"graph", graph_to_json(g)}}};
  }
  Rng rng(instance_seed);
  if (config.type == "tsp") {
    const int n = config.size;
    Eigen::MatrixXd xy(n, 2);
    for (int c = 0; c < n; ++c) xy(c, 0) = rng.uniform(), xy(c, 1) = rng.uniform();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) d(a, b) = (xy.row(a) - xy.row(b)).norm();
    const double penalty = config.penalty > 0.0 ? config.penalty : n * std::max(d.maxCoeff(), 1e-6);
    auto q = tsp_qubo(d, penalty);
    q.set_label("tsp-" + std::to_string(n));
    Json rows = Json::array();
    for (int a = 0; a < n; ++a) rows.push_back(std::vector<double>(d.row(a).begin(), d.row(a).end()));
    return {std::move(q), Json{{"distances", rows}, {"penalty", penalty}}};
  }
  std::vector<double> values;
  std::vector<int> weights;
  for (int i = 0; i < config.size; ++i) {
    values.push_back(static_cast<double>(1 + rng.below(10)));
    weights.push_back(1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.capacity))));
  }
  double total = 0.0;
  for (double v : values) total += v;
  const double penalty = config.penalty > 0.0 ? config.penalty : total + 1.0;
  auto q = knapsack_qubo(values, weights, config.capacity, penalty);
  q.set_label("knapsack-" + std::to_string(config.size));
  return {std::move(q), Json{{"values", values}, {"weights", weights}, {"capacity", config.capacity}, {"penalty", penalty}}};
}

int required_qubits(const ProblemConfig& config) {
  config.validate();
  if (!config.file.empty()) return generate_problem(config, config.seed).qubo.size();
  if (config.type == "maxcut") return maxcut_qubits(config.size);
  if (config.type == "tsp") return tsp_qubits(config.size);
  return knapsack_qubits(config.size, config.capacity);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

FoldMode fold_mode_from_name(const std::string& name) {
  if (name == "per-gate" || name == "per_gate" || name == "local") return FoldMode::PerGate;
  if (name == "global") return FoldMode::Global;
  throw InvalidArgument("unknown fold mode '" + name + "'");
}

ZneConfig zne_from_json(const Json& j) {
  ZneConfig z;
  z.scales = j.value("scales", z.scales);
  z.mode = fold_mode_from_name(j.value("mode", std::string("per-gate")));
  z.lambda_gain = j.value("lambda_gain", z.lambda_gain);
  z.refine_steps = j.value("refine_steps", z.refine_steps);
  z.sigma_gate2 = j.value("sigma_gate2", z.sigma_gate2);
  z.prior_variance = j.value("prior_variance", z.prior_variance);
  z.twirl = j.value("twirl", z.twirl);
  return z;
}

Json zne_config_to_json(const ZneConfig& z) {
  return {{"scales", z.scales},
          {"mode", z.mode == FoldMode::PerGate ? "per-gate" : "global"},
          {"lambda_gain", z.lambda_gain},
          {"refine_steps", z.refine_steps},
          {"sigma_gate2", z.sigma_gate2},
          {"prior_variance", z.prior_variance},
          {"twirl", z.twirl}};
}

std::string method_key(AnsatzStyle s) { return s == AnsatzStyle::Deal ? "deal" : "vanilla"; }

}  // namespace

void ExperimentConfig::validate() const {
  problem.validate();
  if (methods.empty()) throw InvalidArgument("no methods configured");
  if (init != "qpn" && init != "random") throw InvalidArgument("init must be 'qpn' or 'random'");
  if (init_state != "plus" && init_state != "one-hot") throw InvalidArgument("init_state must be 'plus' or 'one-hot'");
  if (init_state == "one-hot" && (problem.type != "tsp" || !problem.file.empty())) {
    throw InvalidArgument("one-hot initial state is only defined for generated TSP instances");
  }
  if (depth_min < 1 || depth_max < depth_min) throw InvalidArgument("depth range must satisfy 1 <= min <= max");
  if (repeats < 1) throw InvalidArgument("repeats must be at least 1");
  if (batch < 1) throw InvalidArgument("batch must be at least 1");
  if (shots < 1 && !exact) throw InvalidArgument("shots must be at least 1 (use exact mode for expectations)");
  if (trajectories < 1) throw InvalidArgument("trajectories must be at least 1");
  if (final_shots < 1) throw InvalidArgument("final_shots must be at least 1");
  if (scan_size < 1) throw InvalidArgument("scan_size must be at least 1");
  if (noise_repeats < 2) throw InvalidArgument("noise_repeats must be at least 2");
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  noise.validate();
  optimizer.validate();
  if (zne) {
    for (int s : zne->scales) {
      if (s < 1 || s % 2 == 0) throw InvalidArgument("ZNE scales must be odd positive integers");
    }
  }
  if (!device.empty() && device.find(".json") != std::string::npos && !fs::exists(device)) {
    throw InvalidArgument("device file '" + device + "' does not exist");
  }
  if (!problem.file.empty() && !fs::exists(problem.file)) {
    throw InvalidArgument("problem file '" + problem.file + "' does not exist");
  }
}

ExperimentConfig ExperimentConfig::from_json(const Json& j, const fs::path& base) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  if (j.contains("schema") && j["schema"] != kSchemaVersion) throw InvalidArgument("unsupported config schema");
  auto resolve = [&](std::string p) {
    if (p.empty() || fs::path(p).is_absolute() || base.empty()) return p;
    return (base / p).string();
  };
  ExperimentConfig c;
  try {
    if (j.contains("problem")) c.problem = ProblemConfig::from_json(j["problem"]);
    c.problem.file = resolve(c.problem.file);
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto& m : j["methods"]) c.methods.push_back(style_from_name(m.get<std::string>()));
    }
    c.init = j.value("init", c.init);
    c.init_state = j.value("init_state", c.init_state);
    c.mixer_floor = j.value("mixer_floor", c.mixer_floor);
    if (j.contains("depth")) {
      const auto& d = j["depth"];
      if (d.is_number_integer()) {
        c.depth_min = c.depth_max = d.get<int>();
      } else {
        c.depth_min = d.value("min", 1);
        c.depth_max = d.value("max", c.depth_min);
      }
    }
    c.repeats = j.value("repeats", c.repeats);
    c.batch = j.value("batch", c.batch);
    c.shots = j.value("shots", c.shots);
    c.exact = j.value("exact", c.exact);
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      c.noise.p1 = n.value("p1", 0.0);
      c.noise.p2 = n.value("p2", 0.0);
      c.noise.readout_flip = n.value("readout", 0.0);
    }
    c.trajectories = j.value("trajectories", c.trajectories);
    if (j.contains("zne") && !j["zne"].is_null()) c.zne = zne_from_json(j["zne"]);
    if (j.contains("optimizer")) {
      const auto& o = j["optimizer"];
      c.optimizer.method = method_from_name(o.value("method", std::string("simplex")));
      c.optimizer.budget = o.value("budget", c.optimizer.budget);
      c.optimizer.xtol = o.value("xtol", c.optimizer.xtol);
      c.optimizer.ftol = o.value("ftol", c.optimizer.ftol);
      c.optimizer.initial_step = o.value("initial_step", c.optimizer.initial_step);
    }
    c.device = j.value("device", c.device);
    if (c.device.find(".json") != std::string::npos) c.device = resolve(c.device);
    c.seed = j.value("seed", c.seed);
    c.final_shots = j.value("final_shots", c.final_shots);
    c.scan_size = j.value("scan_size", c.scan_size);
    c.noise_repeats = j.value("noise_repeats", c.noise_repeats);
    c.jobs = j.value("jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.optimizer.shots = c.exact ? 0 : c.shots;
  c.optimizer.seed = c.seed;
  c.validate();
  return c;
}

Json ExperimentConfig::to_json() const {
  Json m = Json::array();
  for (auto s : methods) m.push_back(std::string(style_name(s)));
  // jobs is omitted: it changes scheduling only, never results.
  return {{"schema", kSchemaVersion},
          {"problem", problem.to_json()},
          {"methods", m},
          {"init", init},
          {"init_state", init_state},
          {"mixer_floor", mixer_floor},
          {"depth", {{"min", depth_min}, {"max", depth_max}}},
          {"repeats", repeats},
          {"batch", batch},
          {"shots", shots},
          {"exact", exact},
          {"noise", {{"p1", noise.p1}, {"p2", noise.p2}, {"readout", noise.readout_flip}}},
          {"trajectories", trajectories},
          {"zne", zne ? zne_config_to_json(*zne) : Json(nullptr)},
          {"optimizer",
           {{"method", std::string(method_name(optimizer.method))},
            {"budget", optimizer.budget},
            {"xtol", optimizer.xtol},
            {"ftol", optimizer.ftol},
            {"initial_step", optimizer.initial_step}}},
          {"device", device},
          {"seed", seed},
          {"final_shots", final_shots},
          {"scan_size", scan_size},
          {"noise_repeats", noise_repeats}};
}

// ---------------------------------------------------------------------------
// Cells

std::uint64_t cell_seed(std::uint64_t master, const CellKey& key) {
  const std::uint64_t method = key.method == AnsatzStyle::Deal ? 1 : 2;
  return derive_seed(derive_seed(derive_seed(master, method), static_cast<std::uint64_t>(key.depth)),
                     static_cast<std::uint64_t>(key.repeat));
}

std::string record_filename(const CellKey& key) {
  return method_key(key.method) + "_p" + std::to_string(key.depth) + "_r" + std::to_string(key.repeat) + ".json";
}

std::vector<CellKey> experiment_cells(const ExperimentConfig& config) {
  std::vector<CellKey> cells;
  for (auto m : config.methods)
    for (int p = config.depth_min; p <= config.depth_max; ++p)
      for (int r = 0; r < config.repeats; ++r) cells.push_back({m, p, r});
  return cells;
}

namespace {

CouplingMap load_device(const std::string& name) {
  if (name.find(".json") != std::string::npos) return device_from_json(read_json(name));
  return device_preset(name);
}

Json energy_scan(const Counts& counts, const QuboInstance& q, int limit, const std::optional<double>& e_opt) {
  std::vector<std::pair<double, std::string>> seen;
  for (const auto& [bits, c] : counts) seen.emplace_back(q.objective(from_bitstring(bits)), bits);
  std::sort(seen.begin(), seen.end());
  Json scan = Json::array();
  for (std::size_t k = 0; k < seen.size() && static_cast<int>(k) < limit; ++k) {
    const bool optimal = e_opt && std::abs(seen[k].first - *e_opt) <= 1e-9 * std::max(1.0, std::abs(*e_opt));
    scan.push_back({{"bits", seen[k].second}, {"energy", seen[k].first}, {"optimal", optimal}});
  }
  return scan;
}

Json counts_to_json(const Counts& counts) {
  Json out = Json::object();
  for (const auto& [bits, c] : counts) out[bits] = c;
  return out;
}

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json run_cell(const ExperimentConfig& config, const CellKey& key) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = cell_seed(config.seed, key);

  // Both methods and all depths of one repeat share the instance.
  const std::uint64_t instance_seed =
      config.problem.vary_instance ? derive_seed(config.problem.seed, static_cast<std::uint64_t>(key.repeat))
                                   : config.problem.seed;
  GeneratedProblem problem = generate_problem(config.problem, instance_seed);
  QuboInstance& q = problem.qubo;
  const int n = q.size();
  if (n > kMaxSimulatedQubits) throw ResourceLimit("instance needs " + std::to_string(n) + " qubits");
  if (!q.known_optimum() && n <= 20) attach_optimum(q);

  std::optional<double> e_opt;
  std::vector<std::uint64_t> optima;
  std::set<std::string> optimal_bits;
  if (const auto& opt = q.known_optimum()) {
    e_opt = opt->energy;
    optima = optimal_indices(q, opt->energy);
    for (auto k : optima) optimal_bits.insert(to_bitstring(k, n));
  }

  const IsingHamiltonian h = qubo_to_ising(q);
  const ImportanceWeights w = importance_weights(q);

  AnsatzSpec spec;
  spec.hamiltonian = h;
  spec.depth = key.depth;
  spec.style = key.method;
  if (key.method == AnsatzStyle::Deal) spec.mixer_graph = mixer_graph_from_ising(h);
  if (config.init_state == "one-hot") {
    std::uint64_t basis = 0;
    for (int c = 0; c < config.problem.size; ++c) basis |= std::uint64_t{1} << tsp_variable(c, c, config.problem.size);
    spec.initial_basis = basis;
  }

  const QaoaParams theta0 = config.init == "qpn"
                                ? initial_params(angle_tensors(w.normalized, key.depth), config.mixer_floor)
                                : random_params(key.depth, derive_seed(seed, 1));

  EvalConfig eval;
  eval.shots = config.exact ? 0 : config.shots;
  eval.noise = config.noise;
  eval.trajectories = config.trajectories;
  eval.zne = config.zne;

  Json mapping = nullptr;
  if (!config.device.empty()) {
    const CouplingMap cm = load_device(config.device);
    const QubitMapping placed = map_qubits(w, q, cm);
    const auto report = connectivity_report(placed, w.normalized, build_circuit(spec, theta0), cm);
    eval.context = PairScaleContext{w.normalized, report.pair_distances, report.cost};
    mapping = {{"device", config.device}, {"placement", placed.pi}, {"connectivity_cost", report.cost}};
  }

  const EnergyEvaluator evaluator(spec, eval);
  OptimizerConfig oc = config.optimizer;
  oc.shots = eval.shots;
  oc.seed = seed;
  const OptResult opt = minimize(evaluator.objective(derive_seed(seed, 2)), theta0.flatten(), oc);
  const QaoaParams best = QaoaParams::unflatten(opt.theta);

  const Eigen::VectorXd probs = evaluator.distribution(best, derive_seed(seed, 3));
  const double expectation = probs.dot(evaluator.observable());
  Counts counts;
  Json batches = Json::array();
  for (int b = 0; b < config.batch; ++b) {
    const Counts batch_counts = sample_counts(probs, n, config.final_shots, derive_seed(derive_seed(seed, 4), b));
    if (!optimal_bits.empty()) batches.push_back(success_rate(batch_counts, optimal_bits));
    for (const auto& [bits, c] : batch_counts) counts[bits] += c;
  }

  double e_noise = 0.0;
  if (!(config.exact && config.noise.noiseless())) {
    e_noise = noise_scale([&](std::uint64_t s) { return evaluator(best, s); }, derive_seed(seed, 5),
                          config.noise_repeats);
  }

  Json metrics{{"e_noise", e_noise}, {"kl_uniform", kl_to_uniform(probs)}};
  metrics["cdf"] = n <= 12 ? vector_to_json(cdf_outcomes(probs)) : Json(nullptr);
  if (e_opt && *e_opt != 0.0) {
    metrics["qnre"] = qnre(expectation, *e_opt);
    metrics["qnre_noise_floored"] = qnre_noise_floored(expectation, *e_opt, e_noise);
  } else {
    metrics["qnre"] = nullptr;
    metrics["qnre_noise_floored"] = nullptr;
  }
  metrics["success_rate"] = optimal_bits.empty() ? Json(nullptr) : Json(success_rate(counts, optimal_bits));
  metrics["success_probability"] = optima.empty() ? Json(nullptr) : Json(success_probability(probs, optima));

  Json zne = nullptr;
  if (config.zne) {
    ZneConfig zc = *config.zne;
    zc.shots = eval.shots;
    zc.trajectories = config.trajectories;
    zne = zne_to_json(mitigated_expectation(build_circuit(spec, best), evaluator.observable(), config.noise, zc,
                                            eval.context, derive_seed(seed, 6))
                          .diagnostics);
  }

  Json optimal = Json::array();
  for (std::size_t k = 0; k < optima.size() && k < 64; ++k) optimal.push_back(to_bitstring(optima[k], n));

  Json record{{"schema", kSchemaVersion},
              {"software_version", std::string(kVersion)},
              {"master_seed", config.seed},
              {"cell",
               {{"method", std::string(style_name(key.method))},
                {"depth", key.depth},
                {"repeat", key.repeat},
                {"seed", seed}}},
              {"config", config.to_json()},
              {"problem",
               {{"label", q.label()},
                {"qubits", n},
                {"instance_seed", instance_seed},
                {"optimum_energy", nullable(e_opt)},
                {"optimal_bitstrings", optimal},
                {"degeneracy", optima.size()},
                {"source", problem.source}}},
              {"mapping", mapping},
              {"init", {{"kind", config.init}, {"theta", vector_to_json(theta0.flatten())}}},
              {"optimizer",
               {{"evaluations", opt.trace.size()},
                {"stop_reason", opt.trace.stop_reason},
                {"best_f", opt.f},
                {"theta", vector_to_json(opt.theta)}}},
              {"trace", trace_to_json(opt.trace)},
              {"final",
               {{"expectation", expectation},
                {"shots", config.final_shots * config.batch},
                {"batch_success_rates", batches},
                {"counts", counts_to_json(counts)}}},
              {"metrics", metrics},
              {"scan", energy_scan(counts, q, config.scan_size, e_opt)},
              {"zne", zne}};
  record["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

std::vector<Json> run_experiment(const ExperimentConfig& config, const fs::path& out) {
  config.validate();
  const auto cells = experiment_cells(config);
  std::vector<Json> records(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t k; !failed && (k = next.fetch_add(1)) < cells.size();) {
      try {
        records[k] = run_cell(config, cells[k]);
        write_json_atomic(out / "records" / record_filename(cells[k]), records[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const int threads = std::min<int>(config.jobs, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  write_text_atomic(out / "summary.csv", summary_csv(records));
  return records;
}

namespace {

std::string csv_value(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    return s.str();
  }
  return v.dump();
}

}  // namespace

std::string summary_csv(const std::vector<Json>& records) {
  std::ostringstream out;
  out << "method,depth,repeat,qubits,evaluations,best_f,expectation,optimum,qnre,qnre_noise_floored,success_rate,"
         "kl_uniform\n";
  for (const auto& r : records) {
    const auto& m = r["metrics"];
    out << csv_value(r["cell"]["method"]) << ',' << csv_value(r["cell"]["depth"]) << ','
        << csv_value(r["cell"]["repeat"]) << ',' << csv_value(r["problem"]["qubits"]) << ','
        << csv_value(r["optimizer"]["evaluations"]) << ',' << csv_value(r["optimizer"]["best_f"]) << ','
        << csv_value(r["final"]["expectation"]) << ',' << csv_value(r["problem"]["optimum_energy"]) << ','
        << csv_value(m["qnre"]) << ',' << csv_value(m["qnre_noise_floored"]) << ',' << csv_value(m["success_rate"])
        << ',' << csv_value(m["kl_uniform"]) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports

std::vector<std::pair<fs::path, Json>> load_records(const std::vector<fs::path>& inputs) {
  if (inputs.empty()) throw InvalidArgument("no record files given");
  std::vector<fs::path> files;
  for (const auto& p : inputs) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".json") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      throw InvalidArgument("'" + p.string() + "' does not exist");
    }
  }
  std::vector<std::pair<fs::path, Json>> out;
  std::vector<std::string> bad;
  for (const auto& f : files) {
    Json j = read_json(f);
    if (!j.is_object() || j.value("schema", -1) != kSchemaVersion || !j.contains("cell")) {
      bad.push_back(f.string());
      continue;
    }
    out.emplace_back(f, std::move(j));
  }
  if (!bad.empty()) {
    std::string msg = "record schema mismatch in:";
    for (const auto& b : bad) msg += " " + b;
    throw InvalidArgument(msg);
  }
  if (out.empty()) throw InvalidArgument("no record files found");
  return out;
}

namespace {

Json mean_std(const std::vector<double>& v) {
  if (v.empty()) return nullptr;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return {{"mean", mean}, {"std", sd}, {"count", v.size()}};
}

void push_if_number(std::vector<double>& v, const Json& j) {
  if (j.is_number()) v.push_back(j.get<double>());
}

}  // namespace

Json aggregate_records(const std::vector<std::pair<fs::path, Json>>& records) {
  struct Cell {
    std::vector<const Json*> runs;
  };
  std::map<std::pair<std::string, int>, Cell> cells;
  for (const auto& [path, r] : records) {
    cells[{r["cell"]["method"].get<std::string>(), r["cell"]["depth"].get<int>()}].runs.push_back(&r);
  }

  Json table = Json::array(), cdfs = Json::array(), convergence = Json::array();
  Json kl_series = Json::object();
  std::map<int, std::map<std::string, double>> success_by_depth;
  for (const auto& [key, cell] : cells) {
    std::vector<double> best, expectation, success, qn, qnf, kl;
    for (const Json* r : cell.runs) {
      push_if_number(best, (*r)["optimizer"]["best_f"]);
      push_if_number(expectation, (*r)["final"]["expectation"]);
      push_if_number(success, (*r)["metrics"]["success_rate"]);
      push_if_number(qn, (*r)["metrics"]["qnre"]);
      push_if_number(qnf, (*r)["metrics"]["qnre_noise_floored"]);
      push_if_number(kl, (*r)["metrics"]["kl_uniform"]);
    }
    table.push_back({{"method", key.first},
                     {"depth", key.second},
                     {"runs", cell.runs.size()},
                     {"best_f", mean_std(best)},
                     {"expectation", mean_std(expectation)},
                     {"success_rate", mean_std(success)},
                     {"qnre", mean_std(qn)},
                     {"qnre_noise_floored", mean_std(qnf)},
                     {"kl_uniform", mean_std(kl)}});
    if (!kl.empty()) kl_series[key.first].push_back({key.second, mean_std(kl)["mean"]});
    if (!success.empty()) success_by_depth[key.second][key.first] = mean_std(success)["mean"].get<double>();

    // Mean CDF over runs sharing a length.
    std::vector<double> cdf;
    std::size_t used = 0;
    for (const Json* r : cell.runs) {
      const auto& c = (*r)["metrics"]["cdf"];
      if (!c.is_array()) continue;
      if (cdf.empty()) cdf.assign(c.size(), 0.0);
      if (c.size() != cdf.size()) continue;
      for (std::size_t k = 0; k < c.size(); ++k) cdf[k] += c[k].get<double>();
      ++used;
    }
    if (used) {
      for (double& v : cdf) v /= static_cast<double>(used);
      cdfs.push_back({{"method", key.first}, {"depth", key.second}, {"cdf", cdf}});
    }

    // Mean best-so-far curve over the last 50 runs; shorter traces hold their final value.
    std::vector<const Json*> last(cell.runs.end() - std::min<std::ptrdiff_t>(50, std::ssize(cell.runs)), cell.runs.end());
    std::size_t length = 0;
    for (const Json* r : last) length = std::max(length, (*r)["trace"]["best_f"].size());
    std::vector<double> curve(length, 0.0);
    for (const Json* r : last) {
      const auto& b = (*r)["trace"]["best_f"];
      for (std::size_t t = 0; t < length && !b.empty(); ++t) curve[t] += b[std::min(t, b.size() - 1)].get<double>();
    }
    for (double& v : curve) v /= static_cast<double>(last.size());
    convergence.push_back({{"method", key.first}, {"depth", key.second}, {"runs", last.size()}, {"best_f_mean", curve}});
  }

  Json scans = Json::array();
  for (const auto& [path, r] : records) {
    std::vector<double> energies;
    for (const auto& s : r["scan"]) energies.push_back(s["energy"].get<double>());
    const auto& opt = r["problem"]["optimum_energy"];
    Json found = nullptr;
    if (opt.is_number() && !energies.empty()) {
      const double e = opt.get<double>();
      found = std::abs(energies.front() - e) <= 1e-9 * std::max(1.0, std::abs(e));
    }
    scans.push_back({{"file", path.filename().string()},
                     {"method", r["cell"]["method"]},
                     {"depth", r["cell"]["depth"]},
                     {"repeat", r["cell"]["repeat"]},
                     {"energies", energies},
                     {"optimum", opt},
                     {"optimum_found", found}});
  }

  Json difference = Json::array();
  for (const auto& [depth, by_method] : success_by_depth) {
    if (by_method.count("DEAL") && by_method.count("VANILLA")) {
      difference.push_back({{"depth", depth}, {"deal_minus_vanilla", by_method.at("DEAL") - by_method.at("VANILLA")}});
    }
  }

  return {{"schema", kSchemaVersion},
          {"records", records.size()},
          {"cells", table},
          {"kl_vs_depth", kl_series},
          {"cdf", cdfs},
          {"convergence", convergence},
          {"scans", scans},
          {"success_difference", difference}};
}

std::string aggregate_csv(const Json& aggregate) {
  std::ostringstream out;
  const char* metrics[] = {"best_f", "expectation", "success_rate", "qnre", "qnre_noise_floored", "kl_uniform"};
  out << "method,depth,runs";
  for (const char* m : metrics) out << ',' << m << "_mean," << m << "_std";
  out << '\n';
  for (const auto& c : aggregate["cells"]) {
    out << csv_value(c["method"]) << ',' << csv_value(c["depth"]) << ',' << csv_value(c["runs"]);
    for (const char* m : metrics) {
      const auto& s = c[m];
      out << ',' << (s.is_null() ? "" : csv_value(s["mean"])) << ',' << (s.is_null() ? "" : csv_value(s["std"]));
    }
    out << '\n';
  }
  return out.str();
}

std::string inspect_document(const Json& j) {
  std::ostringstream out;
  out.precision(10);
  if (j.contains("cell") && j.contains("schema")) {
    const auto& c = j["cell"];
    out << "record: " << c["method"].get<std::string>() << " p=" << c["depth"] << " repeat=" << c["repeat"]
        << " seed=" << c["seed"] << '\n';
    out << "problem: " << j["problem"]["label"].get<std::string>() << " (" << j["problem"]["qubits"] << " qubits)\n";
    out << "evaluations: " << j["optimizer"]["evaluations"] << " (" << j["optimizer"]["stop_reason"].get<std::string>()
        << ")\n";
    out << "best f: " << j["optimizer"]["best_f"] << '\n';
    out << "expectation: " << j["final"]["expectation"] << '\n';
    out << "optimum: " << j["problem"]["optimum_energy"] << '\n';
    for (const char* m : {"qnre", "qnre_noise_floored", "success_rate", "kl_uniform", "e_noise"}) {
      out << m << ": " << j["metrics"][m] << '\n';
    }
    return out.str();
  }
  if (j.contains("q") && j.contains("n")) {
    const QuboInstance q = qubo_from_json(j);
    const IsingHamiltonian h = qubo_to_ising(q);
    const ImportanceWeights w = importance_weights(q);
    out << "problem: " << (q.label().empty() ? "(unlabelled)" : q.label()) << '\n';
    out << "qubits: " << q.size() << '\n';
    out << "quadratic terms: " << zz_terms(h).size() << '\n';
    out << "offset: " << q.offset() << '\n';
    if (const auto& opt = q.known_optimum()) out << "optimum: " << opt->bits << " energy " << opt->energy << '\n';
    out << "importance weights:";
    for (double v : w.normalized) out << ' ' << v;
    out << '\n';
    return out.str();
  }
  if (j.contains("problem") && j["problem"].is_object() && j.contains("optimizer")) {
    const ExperimentConfig c = ExperimentConfig::from_json(j);
    out << "config: " << c.problem.type << " size " << c.problem.size << ", " << required_qubits(c.problem)
        << " qubits\n";
    out << "cells: " << experiment_cells(c).size() << '\n';
    return out.str();
  }
  if (j.contains("qubits") && j.contains("edges") && !j.contains("gates")) {
    const CouplingMap cm = device_from_json(j);
    double mean = 0.0;
    for (const auto& e : cm.edges) mean += e.error;
    out << "device: " << cm.physical_count << " qubits, " << cm.edges.size() << " couplers\n";
    out << "mean coupler error: " << mean / static_cast<double>(cm.edges.size()) << '\n';
    out << "diameter: " << distance_matrix(cm).maxCoeff() << '\n';
    return out.str();
  }
  if (j.contains("gates")) {
    const Circuit c = circuit_from_json(j);
    out << "circuit: " << c.n << " qubits, " << c.gates.size() << " gates, " << c.two_qubit_count()
        << " two-qubit\n";
    return out.str();
  }
  throw InvalidArgument("unrecognised document");
}

}  // namespace deal
