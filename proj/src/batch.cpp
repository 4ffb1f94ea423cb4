#include "icicle/batch.hpp"

#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "icicle/engine.hpp"
#include "icicle/gen.hpp"
#include "icicle/verify.hpp"

namespace icicle {

namespace {

BatchRow run_one(int requested_n, std::uint64_t seed, bool monitors) {
  Configuration input = gen_sphere(requested_n, seed);
  BatchRow row;
  row.n = static_cast<int>(input.tiles.size());
  row.seed = seed;
  row.diam_in = diameter(input.tiles);

  RunRecorder recorder(input);
  std::vector<Observer*> observers;
  if (monitors) observers.push_back(&recorder);
  RunResult result =
      run_to_termination(input, default_step_budget(input), observers);

  row.steps_total = result.steps_total;
  row.steps_proj = result.steps_proj;
  row.steps_shift = result.steps_shift;
  row.steps_other = result.steps_other;
  row.terminated = result.terminated;
  row.diam_out = diameter(result.final_config.tiles);
  if (monitors) {
    row.violations = check_recorded_run(recorder).size();
    if (result.terminated) {
      try {
        if (!is_icicle(result.final_config.tiles)) ++row.violations;
      } catch (const std::exception&) {
        ++row.violations;
      }
    }
  }
  return row;
}

}  // namespace

std::vector<BatchRow> run_batch(const BatchParams& params) {
  if (params.n_min < 1 || params.n_max < params.n_min || params.n_step < 1 ||
      params.samples < 1) {
    throw std::invalid_argument("run_batch: bad parameter range");
  }
  struct Task {
    int n;
    int sample;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (int n = params.n_min; n <= params.n_max; n += params.n_step) {
    for (int s = 0; s < params.samples; ++s) {
      tasks.push_back({n, s,
                       child_seed(params.base_seed,
                                  static_cast<std::uint64_t>(n),
                                  static_cast<std::uint64_t>(s))});
    }
  }

  std::vector<BatchRow> rows(tasks.size());
  const int jobs = std::max(1, params.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      rows[i] = run_one(tasks[i].n, tasks[i].seed, params.monitors);
    }
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> workers;
    std::atomic<bool> failed{false};
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          std::size_t i = cursor.fetch_add(1);
          if (i >= tasks.size() || failed.load()) return;
          try {
            rows[i] = run_one(tasks[i].n, tasks[i].seed, params.monitors);
          } catch (...) {
            failed.store(true);
            return;
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    if (failed.load()) {
      throw std::runtime_error("run_batch: a worker run failed");
    }
  }
  return rows;
}

std::string batch_csv(const std::vector<BatchRow>& rows) {
  std::ostringstream out;
  out << "n,seed,steps_total,steps_proj,steps_shift,steps_other,"
         "diam_in,diam_out,terminated,violations\n";
  for (const BatchRow& r : rows) {
    out << r.n << ',' << r.seed << ',' << r.steps_total << ',' << r.steps_proj
        << ',' << r.steps_shift << ',' << r.steps_other << ',' << r.diam_in
        << ',' << r.diam_out << ',' << (r.terminated ? 1 : 0) << ','
        << r.violations << '\n';
  }
  return out.str();
}

}  // namespace icicle
