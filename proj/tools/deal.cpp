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

// deal generate|run|report|inspect

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "deal/errors.hpp"
#include "deal/harness.hpp"
#include "deal/io.hpp"

namespace fs = std::filesystem;
using deal::Json;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string part; std::getline(in, part, sep);) out.push_back(part);
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad number for ") + what + ": '" + s + "'");
  }
}

Json parse_noise(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw UsageError("--noise expects p1,p2,readout");
  return {{"p1", parse_double(parts[0], "--noise")},
          {"p2", parse_double(parts[1], "--noise")},
          {"readout", parse_double(parts[2], "--noise")}};
}

// "scales=1,3,5" optionally followed by ";mode=global;refine_steps=2;..."
Json parse_zne(const std::string& text, Json base) {
  if (!base.is_object()) base = Json::object();
  for (const auto& item : split(text, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--zne expects key=value pairs, e.g. scales=1,3,5");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "scales") {
      std::vector<int> scales;
      for (const auto& s : split(value, ',')) scales.push_back(static_cast<int>(parse_double(s, "--zne scales")));
      base["scales"] = scales;
    } else if (key == "mode") {
      base["mode"] = value;
    } else if (key == "twirl") {
      base["twirl"] = value == "1" || value == "true";
    } else if (key == "refine_steps") {
      base["refine_steps"] = static_cast<int>(parse_double(value, "--zne refine_steps"));
    } else if (key == "lambda_gain" || key == "sigma_gate2" || key == "prior_variance") {
      base[key] = parse_double(value, "--zne");
    } else {
      throw UsageError("unknown --zne key '" + key + "'");
    }
  }
  return base;
}

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  if (!fs::exists(path)) throw UsageError("config file '" + path + "' does not exist");
  try {
    return deal::read_json(path);
  } catch (const deal::InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

struct GenerateOptions {
  std::string config;
  std::string problem = "maxcut";
  int size = 5;
  std::string graph = "complete";
  double edge_prob = 0.5;
  int capacity = 7;
  double penalty = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_generate(const GenerateOptions& o, const std::vector<std::string>& explicit_flags) {
  Json pj = load_config(o.config).value("problem", Json::object());
  auto given = [&](const char* flag) {
    return std::find(explicit_flags.begin(), explicit_flags.end(), flag) != explicit_flags.end();
  };
  if (!pj.contains("type") || given("--problem")) pj["type"] = o.problem;
  if (!pj.contains("size") || given("--size")) pj["size"] = o.size;
  if (!pj.contains("graph") || given("--graph")) pj["graph"] = o.graph;
  if (!pj.contains("edge_prob") || given("--edge-prob")) pj["edge_prob"] = o.edge_prob;
  if (!pj.contains("capacity") || given("--capacity")) pj["capacity"] = o.capacity;
  if (!pj.contains("penalty") || given("--penalty")) pj["penalty"] = o.penalty;
  if (!pj.contains("seed") || given("--seed")) pj["seed"] = o.seed;

  deal::ProblemConfig pc;
  try {
    pc = deal::ProblemConfig::from_json(pj);
  } catch (const deal::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  auto generated = deal::generate_problem(pc, pc.seed);
  if (generated.qubo.size() <= 20) deal::attach_optimum(generated.qubo);
  Json doc = deal::qubo_to_json(generated.qubo);
  doc["source"] = generated.source;

  std::cout << "qubits: " << generated.qubo.size() << '\n';
  if (o.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    fs::path target = o.out;
    if (fs::is_directory(target)) target /= generated.qubo.label() + ".json";
    deal::write_json_atomic(target, doc);
    std::cout << "wrote " << target.string() << '\n';
  }
  return kOk;
}

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "deal-out";
  bool exact = false;
  std::string noise;
  std::string zne;
  std::optional<int> jobs;
};

int cmd_run(const RunOptions& o) {
  Json j = load_config(o.config);
  if (o.seed) j["seed"] = *o.seed;
  if (o.exact) j["exact"] = true;
  if (!o.noise.empty()) j["noise"] = parse_noise(o.noise);
  if (!o.zne.empty()) j["zne"] = parse_zne(o.zne, j.value("zne", Json::object()));
  if (o.jobs) j["jobs"] = *o.jobs;

  deal::ExperimentConfig config;
  try {
    const fs::path base = o.config.empty() ? fs::path{} : fs::path(o.config).parent_path();
    config = deal::ExperimentConfig::from_json(j, base);
  } catch (const deal::InvalidArgument& e) {
    throw UsageError(e.what());
  }
  const auto records = deal::run_experiment(config, o.out);
  std::cout << "wrote " << records.size() << " record(s) to " << (fs::path(o.out) / "records").string() << '\n';
  std::cout << "summary: " << (fs::path(o.out) / "summary.csv").string() << '\n';
  return kOk;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& format, const std::string& out) {
  if (inputs.empty()) throw UsageError("report needs at least one record file or directory");
  std::vector<fs::path> paths(inputs.begin(), inputs.end());
  const Json aggregate = deal::aggregate_records(deal::load_records(paths));
  const std::string text = format == "csv" ? deal::aggregate_csv(aggregate) : aggregate.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    deal::write_text_atomic(out, text);
  }
  return kOk;
}

int cmd_inspect(const std::string& path, const std::string& device) {
  if (!device.empty()) {
    std::cout << deal::inspect_document(deal::device_to_json(deal::device_preset(device)));
    return kOk;
  }
  if (path.empty()) throw UsageError("inspect needs a file or --device NAME");
  if (!fs::exists(path)) throw UsageError("'" + path + "' does not exist");
  std::cout << deal::inspect_document(deal::read_json(path));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-aware QAOA experiments on a statevector simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(deal::kVersion));

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write a problem instance and print its qubit count");
  generate->add_option("--config", gen.config, "Take problem settings from this config");
  generate->add_option("--problem", gen.problem, "maxcut | tsp | knapsack")
      ->check(CLI::IsMember({"maxcut", "tsp", "knapsack"}));
  generate->add_option("--size,--nodes,--cities,--items", gen.size, "Nodes, cities or items")->check(CLI::PositiveNumber);
  generate->add_option("--graph", gen.graph, "complete | erdos-renyi")->check(CLI::IsMember({"complete", "erdos-renyi"}));
  generate->add_option("--edge-prob", gen.edge_prob, "Edge probability for erdos-renyi graphs");
  generate->add_option("--capacity", gen.capacity, "Knapsack capacity");
  generate->add_option("--penalty", gen.penalty, "Constraint penalty (0 picks a default)");
  generate->add_option("--seed", gen.seed, "Instance seed");
  generate->add_option("--out", gen.out, "Output file or directory (stdout if omitted)");

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment config and write one record per cell");
  run_cmd->add_option("--config", run.config, "Experiment config (JSON)")->required();
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_flag("--exact", run.exact, "Exact expectations instead of sampled shots");
  run_cmd->add_option("--noise", run.noise, "p1,p2,readout");
  run_cmd->add_option("--zne", run.zne, "scales=1,3,5[;mode=global;refine_steps=N;twirl=1]");
  run_cmd->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> report_inputs;
  std::string report_format = "json", report_out;
  auto* report = app.add_subcommand("report", "Aggregate record files");
  report->add_option("inputs", report_inputs, "Record files or directories");
  report->add_option("--format", report_format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  report->add_option("--out", report_out, "Output file (stdout if omitted)");

  std::string inspect_path, inspect_device;
  auto* inspect = app.add_subcommand("inspect", "Summarise a problem, device, config or record file");
  inspect->add_option("file", inspect_path, "JSON document");
  inspect->add_option("--device", inspect_device, "Bundled device preset name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) {
      std::vector<std::string> given;
      for (const char* f : {"--problem", "--size", "--graph", "--edge-prob", "--capacity", "--penalty", "--seed"}) {
        if (generate->count(f) > 0) given.emplace_back(f);
      }
      return cmd_generate(gen, given);
    }
    if (run_cmd->parsed()) return cmd_run(run);
    if (report->parsed()) return cmd_report(report_inputs, report_format, report_out);
    if (inspect->parsed()) return cmd_inspect(inspect_path, inspect_device);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
