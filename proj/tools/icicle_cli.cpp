// Command-line surface for the icicle formation simulator:
//   run     simulate one configuration to termination, with monitors
//   gen     write generated instances in the configuration text format
//   batch   seeded batch experiments over random sphere instances, CSV out
//   verify  report connectivity, icicle status and the agent node's class
//   census  the 64-neighborhood removability table
//
// Exit codes for `run` and `batch`: 0 success, 1 usage or I/O error,
// 2 monitor violation (or a non-icicle final shape), 3 step budget exceeded.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "icicle/batch.hpp"
#include "icicle/engine.hpp"
#include "icicle/gen.hpp"
#include "icicle/verify.hpp"
#include "icicle/world.hpp"

namespace {

using namespace icicle;

int default_jobs() {
  if (const char* env = std::getenv("ICICLE_JOBS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 1;
}

int cmd_run(const std::string& input, const std::string& trace_path,
            bool check_invariants, std::uint64_t max_steps) {
  Configuration c;
  try {
    c = load_configuration_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  RunRecorder recorder(c);
  std::vector<Observer*> observers;
  if (check_invariants || !trace_path.empty()) observers.push_back(&recorder);
  if (max_steps == 0) max_steps = default_step_budget(c);

  RunResult result;
  try {
    result = run_to_termination(c, max_steps, observers);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) {
      std::cerr << "error: cannot write " << trace_path << "\n";
      return 1;
    }
    write_trace(out, recorder.trace());
  }

  std::cout << "tiles " << result.final_config.tiles.size() << "\n"
            << "steps_total " << result.steps_total << "\n"
            << "steps_proj " << result.steps_proj << "\n"
            << "steps_shift " << result.steps_shift << "\n"
            << "steps_other " << result.steps_other << "\n"
            << "diam_in " << diameter(c.tiles) << "\n"
            << "diam_out " << diameter(result.final_config.tiles) << "\n"
            << "terminated " << (result.terminated ? 1 : 0) << "\n";

  if (!result.terminated) {
    std::cout << "status step-budget-exceeded\n";
    return 3;
  }

  bool icicle_ok = false;
  try {
    icicle_ok = is_icicle(result.final_config.tiles);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cout << "icicle " << (icicle_ok ? 1 : 0) << "\n";

  if (check_invariants) {
    auto violations = check_recorded_run(recorder);
    std::cout << "violations " << violations.size() << "\n";
    for (const Violation& v : violations) {
      std::cout << "violation " << v.monitor << " step " << v.step << " "
                << v.detail << "\n";
    }
    if (!violations.empty()) return 2;
  }
  return icicle_ok ? 0 : 2;
}

int cmd_gen(const GenSpec& spec, const std::string& out_path) {
  Configuration c;
  try {
    c = generate(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    if (out_path.empty() || out_path == "-") {
      save_configuration(std::cout, c);
    } else {
      save_configuration_file(out_path, c);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_batch(const BatchParams& params, const std::string& out_path) {
  std::vector<BatchRow> rows;
  try {
    rows = run_batch(params);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const std::string csv = batch_csv(rows);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 1;
    }
    out << csv;
  }
  for (const BatchRow& r : rows) {
    if (!r.terminated || r.violations != 0) return 2;
  }
  return 0;
}

int cmd_verify(const std::string& input) {
  Configuration c;
  try {
    c = load_configuration_file(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const bool connected = is_connected(c.tiles);
  std::cout << "tiles " << c.tiles.size() << "\n"
            << "connected " << (connected ? 1 : 0) << "\n";
  if (connected) {
    try {
      std::cout << "icicle " << (is_icicle(c.tiles) ? 1 : 0) << "\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  }
  NodeClass nc = classify(c, c.agent);
  switch (nc.kind) {
    case NodeClass::Kind::Removable:
      std::cout << "agent_node removable\n";
      break;
    case NodeClass::Kind::Shiftable: {
      std::cout << "agent_node shiftable bridges";
      for (const Coord& b : nc.bridges) {
        std::cout << " (" << b.x << ',' << b.y << ',' << b.z << ')';
      }
      std::cout << "\n";
      break;
    }
    case NodeClass::Kind::Unmovable:
      std::cout << "agent_node unmovable\n";
      break;
  }
  return 0;
}

int cmd_census() {
  CensusTable table = census();
  std::cout << "total " << table.entries.size() << "\n"
            << "removable " << table.removable << "\n"
            << "shiftable " << table.shiftable << "\n"
            << "unmovable " << table.unmovable << "\n";
  for (const CensusEntry& e : table.entries) {
    std::cout << "case {";
    for (std::size_t i = 0; i < e.tiled.size(); ++i) {
      std::cout << (i ? " " : "") << direction_name(e.tiled[i]);
    }
    std::cout << "} ";
    switch (e.kind) {
      case NodeClass::Kind::Removable:
        std::cout << "removable";
        break;
      case NodeClass::Kind::Shiftable:
        std::cout << "shiftable";
        break;
      case NodeClass::Kind::Unmovable:
        std::cout << "unmovable";
        break;
    }
    std::cout << " -> " << dispatch_case_name(e.dispatch) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-agent icicle formation on the FCC lattice"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "simulate one configuration");
  std::string run_input;
  std::string run_trace;
  bool run_check = true;
  std::uint64_t run_max_steps = 0;
  run->add_option("--input", run_input, "configuration file")->required();
  run->add_option("--trace", run_trace, "write a step trace to this file");
  run->add_flag("--check-invariants,!--no-check-invariants", run_check,
                "run the lemma monitors (default on)");
  run->add_option("--max-steps", run_max_steps,
                  "step budget (default 10*(n+1)^3)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  GenSpec spec;
  std::string gen_kind;
  std::string gen_out;
  int gen_n = 10;
  std::uint64_t gen_seed = 0;
  int gen_k = 2, gen_w = 2, gen_h = 2, gen_len = 3;
  gen->add_option("--kind", gen_kind,
                  "sphere|worst|parallelogram|column|tower|line")
      ->required();
  gen->add_option("--n", gen_n, "sphere: target component size");
  gen->add_option("--seed", gen_seed, "sphere: RNG seed");
  gen->add_option("--k", gen_k, "worst: family parameter");
  gen->add_option("--width", gen_w, "parallelogram width");
  gen->add_option("--height", gen_h, "parallelogram height");
  gen->add_option("--len", gen_len, "column/tower/line length");
  gen->add_option("--out", gen_out, "output file ('-' for stdout)");

  // batch
  auto* batch = app.add_subcommand("batch", "seeded batch experiments");
  BatchParams params;
  params.jobs = default_jobs();
  std::string batch_out;
  batch->add_option("--n-min", params.n_min, "smallest n");
  batch->add_option("--n-max", params.n_max, "largest n");
  batch->add_option("--step", params.n_step, "n increment");
  batch->add_option("--samples", params.samples, "runs per n");
  batch->add_option("--seed", params.base_seed, "base seed");
  batch->add_option("--jobs", params.jobs,
                    "worker threads (default $ICICLE_JOBS or 1)");
  batch->add_option("--out", batch_out, "CSV path ('-' for stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "inspect a configuration");
  std::string verify_input;
  verify->add_option("--input", verify_input, "configuration file")
      ->required();

  // census
  app.add_subcommand("census", "64-neighborhood removability table");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_input, run_trace, run_check, run_max_steps);
  if (gen->parsed()) {
    if (gen_kind == "sphere") {
      spec.kind = GenSpec::Kind::Sphere;
      spec.n = gen_n;
      spec.seed = gen_seed;
    } else if (gen_kind == "worst") {
      spec.kind = GenSpec::Kind::WorstCase;
      spec.k = gen_k;
    } else if (gen_kind == "parallelogram") {
      spec.kind = GenSpec::Kind::Parallelogram;
      spec.width = gen_w;
      spec.height = gen_h;
    } else if (gen_kind == "column") {
      spec.kind = GenSpec::Kind::Column;
      spec.length = gen_len;
    } else if (gen_kind == "tower") {
      spec.kind = GenSpec::Kind::Tower;
      spec.length = gen_len;
    } else if (gen_kind == "line") {
      spec.kind = GenSpec::Kind::Line;
      spec.length = gen_len;
    } else {
      std::cerr << "error: unknown kind '" << gen_kind << "'\n";
      return 1;
    }
    return cmd_gen(spec, gen_out);
  }
  if (batch->parsed()) return cmd_batch(params, batch_out);
  if (verify->parsed()) return cmd_verify(verify_input);
  return cmd_census();
}
