// Copyright 2025 The emul Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// emul: generate instances, build emulators and oracles, verify, bench.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "emul/harness.hpp"
#include "emul/pipeline.hpp"

namespace {

using emul::Instance;
using nlohmann::json;

json ReadJson(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw emul::Error(emul::ErrorKind::kBadSpec, "cannot open " + path);
  return json::parse(f);
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream f(path);
  if (!f) throw emul::Error(emul::ErrorKind::kBadSpec, "cannot write " + path);
  f << text << "\n";
}

struct BenchRow {
  emul::GeneratorSpec spec;
  double eps;
  std::string mode;
};

std::vector<BenchRow> Suite(const std::string& name) {
  std::vector<BenchRow> rows;
  auto add = [&](std::string fam, int m, int k, std::string w, std::string place, double eps,
                 std::string mode) {
    emul::GeneratorSpec s;
    s.family = fam;
    s.m = m;
    s.k = k;
    s.weights = w;
    s.placement = place;
    rows.push_back({s, eps, mode});
  };
  if (name == "quick") {
    add("grid", 16, 16, "unit", "boundary", 0.25, "onehole");
    add("annulus", 12, 16, "uniform", "holes", 0.25, "multihole");
    add("grid", 24, 16, "uniform", "random", 0.5, "general");
    return rows;
  }
  if (name != "default") throw emul::Error(emul::ErrorKind::kBadSpec, "unknown suite " + name);
  for (int k : {32, 64, 128, 256}) add("grid", 64, k, "unit", "boundary", 0.25, "onehole");
  for (double eps : {0.5, 0.25, 0.1}) {
    add("grid", 48, 96, "uniform", "boundary", eps, "onehole");
    add("overlay", 40, 96, "uniform", "boundary", eps, "onehole");
    add("spread-stress", 32, 64, "unit", "boundary", eps, "onehole");
    add("annulus", 40, 64, "loguniform", "holes", eps, "multihole");
    add("random-triangulation", 3000, 48, "uniform", "random", eps, "general");
    add("grid", 96, 16, "unit", "random", eps, "bootstrap");
  }
  return rows;
}

int Run(int argc, char** argv) {
  CLI::App app{"Planar distance emulators"};
  app.require_subcommand(1);

  emul::GeneratorSpec gs;
  std::string gen_out = "-";
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--family", gs.family)
      ->check(CLI::IsMember({"grid", "halved-grid", "annulus", "random-triangulation", "overlay",
                             "spread-stress"}));
  gen->add_option("--m", gs.m, "Side length, or vertex count for random-triangulation");
  gen->add_option("--k", gs.k, "Terminal count");
  gen->add_option("--weights", gs.weights)->check(CLI::IsMember({"unit", "uniform", "loguniform"}));
  gen->add_option("--placement", gs.placement)
      ->check(CLI::IsMember({"boundary", "holes", "random"}));
  gen->add_option("--gap", gs.gap, "Weight between the halves of spread-stress");
  gen->add_option("--seed", gs.seed);
  gen->add_option("-o,--output", gen_out);

  std::string em_in, em_out = "-", em_report, em_mode = "onehole";
  double em_eps = 0.25;
  double lambda_c = 0;
  auto* emulate = app.add_subcommand("emulate", "Build an emulator");
  emulate->add_option("-i,--input", em_in)->required();
  emulate->add_option("--eps", em_eps)->check(CLI::Range(0.0, 1.0));
  emulate->add_option("--mode", em_mode)
      ->check(CLI::IsMember({"onehole", "multihole", "general", "bootstrap"}));
  emulate->add_option("--lambda-c", lambda_c, "Base-case threshold factor (0 keeps lambda* = 32)");
  emulate->add_option("-o,--output", em_out);
  emulate->add_option("--report", em_report);

  std::string or_in, or_mode = "onehole";
  double or_eps = 0.25;
  auto* oracle = app.add_subcommand("oracle", "Answer 't1 t2' queries from stdin");
  oracle->add_option("-i,--input", or_in)->required();
  oracle->add_option("--eps", or_eps)->check(CLI::Range(0.0, 1.0));
  oracle->add_option("--mode", or_mode)
      ->check(CLI::IsMember({"onehole", "multihole", "general", "bootstrap"}));

  std::string vf_orig, vf_emul, vf_report;
  double vf_eps = 0.25;
  auto* verify = app.add_subcommand("verify", "Check an emulator against its original");
  verify->add_option("--original", vf_orig)->required();
  verify->add_option("--emulator", vf_emul)->required();
  verify->add_option("--eps", vf_eps);
  verify->add_option("--report", vf_report);

  std::string suite = "default", bench_out = "-";
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and print CSV");
  bench->add_option("--suite", suite)->check(CLI::IsMember({"default", "quick"}));
  bench->add_option("-o,--output", bench_out);

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    WriteText(gen_out, emul::DumpCanonical(emul::InstanceToJson(emul::Generate(gs))));
    return 0;
  }
  if (emulate->parsed()) {
    Instance in = emul::InstanceFromJson(ReadJson(em_in));
    emul::PipelineConfig cfg;
    cfg.emulator.lambda_c = lambda_c;
    emul::EmulatorReport rep;
    Instance out = emul::Emulate(in, em_mode, em_eps, cfg, &rep);
    WriteText(em_out, emul::DumpCanonical(emul::InstanceToJson(out)));
    if (!em_report.empty()) WriteText(em_report, rep.ToJson().dump(2));
    return 0;
  }
  if (oracle->parsed()) {
    Instance in = emul::InstanceFromJson(ReadJson(or_in));
    auto o = emul::DistanceOracle::Build(in, or_eps, or_mode);
    std::string line;
    int bad = 0;
    while (std::getline(std::cin, line)) {
      std::istringstream ss(line);
      int a, b;
      if (!(ss >> a >> b)) continue;
      try {
        std::cout << o.Query(a, b) << "\n";
      } catch (const emul::Error& e) {
        std::cerr << e.what() << "\n";
        ++bad;
      }
    }
    return bad ? 1 : 0;
  }
  if (verify->parsed()) {
    Instance a = emul::InstanceFromJson(ReadJson(vf_orig));
    Instance b = emul::InstanceFromJson(ReadJson(vf_emul));
    auto rep = emul::VerifyEmulator(a, b, vf_eps);
    const std::string text = rep.ToJson().dump(2);
    WriteText(vf_report.empty() ? "-" : vf_report, text);
    return rep.pass ? 0 : 1;
  }
  if (bench->parsed()) {
    std::ostringstream csv;
    csv << "family,n,k,eps,mode,size,max_distortion,time_s\n";
    for (const auto& row : Suite(suite)) {
      Instance in = emul::Generate(row.spec);
      auto t0 = std::chrono::steady_clock::now();
      Instance out = emul::Emulate(in, row.mode, row.eps);
      double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      auto rep = emul::VerifyEmulator(in, out, row.eps);
      csv << row.spec.family << "," << in.g.num_vertices() << "," << in.k() << "," << row.eps
          << "," << row.mode << "," << out.g.num_vertices() << "," << rep.max_log << "," << sec
          << "\n";
    }
    WriteText(bench_out, csv.str());
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const emul::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
