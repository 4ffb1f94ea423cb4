#pragma once

// Deterministic batch experiments over random sphere instances: one run per
// (n, sample) pair, each seeded independently of execution order, results
// merged in (n, sample) order so the CSV bytes never depend on scheduling.

#include <cstdint>
#include <string>
#include <vector>

#include "icicle/world.hpp"

namespace icicle {

struct BatchParams {
  int n_min = 10;
  int n_max = 50;
  int n_step = 10;
  int samples = 5;
  std::uint64_t base_seed = 0;
  int jobs = 1;           // worker threads; output is identical for any value
  bool monitors = true;   // run the lemma monitors on every run
};

struct BatchRow {
  int n = 0;               // final tile count
  std::uint64_t seed = 0;  // per-run derived seed
  std::uint64_t steps_total = 0;
  std::uint64_t steps_proj = 0;
  std::uint64_t steps_shift = 0;
  std::uint64_t steps_other = 0;
  int diam_in = 0;
  int diam_out = 0;
  bool terminated = false;
  std::uint64_t violations = 0;  // monitor findings (0 when clean)
};

std::vector<BatchRow> run_batch(const BatchParams& params);

// Fixed header: n,seed,steps_total,steps_proj,steps_shift,steps_other,
// diam_in,diam_out,terminated,violations
std::string batch_csv(const std::vector<BatchRow>& rows);

}  // namespace icicle
