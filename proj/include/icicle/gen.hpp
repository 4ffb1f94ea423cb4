#pragma once

// Instance generators: the random-sphere sampler, the worst-case family and
// simple deterministic fixture shapes. Every generated configuration is
// connected with the agent on a tile, carrying.

#include <cstdint>

#include "icicle/world.hpp"

namespace icicle {

// SplitMix64: the documented PRNG for everything random in this project.
// Fixed constants, identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection from the top of the range.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// One-shot mix of the same flavor; used to derive independent streams.
std::uint64_t mix64(std::uint64_t v);

// Deterministic per-run seed for batch experiments: independent of execution
// order, so parallel and sequential batches agree byte for byte.
std::uint64_t child_seed(std::uint64_t base_seed, std::uint64_t n,
                         std::uint64_t sample_index);

struct GenSpec {
  enum class Kind : std::uint8_t {
    Sphere,
    WorstCase,
    Parallelogram,
    Column,
    Tower,
    Line,
  };
  Kind kind = Kind::Sphere;
  int n = 1;               // Sphere: target component size
  std::uint64_t seed = 0;  // Sphere only
  int k = 2;               // WorstCase
  int width = 1, height = 1;  // Parallelogram
  int length = 1;          // Column / Tower / Line
};

Configuration generate(const GenSpec& spec);

// §6 sampler: tiles are dropped uniformly at random on empty lattice nodes
// whose embedding lies within radius 4*n^(1/3) of the embedded origin until
// a connected component reaches size >= n; tiles outside that component are
// removed and the agent starts on a uniformly random component tile,
// carrying. Deterministic in (n, seed).
Configuration gen_sphere(int n, std::uint64_t seed);

// Fixed concrete instantiation of the worst-case family: k stacked copies
// (direction UNE) of a three-layer block whose middle layer holds fragments
// F_1..F_k ordered east to west with |F_i| = Theta(i), each bounding box
// containing the agent's start node and excluding F_{i+1}, plus a single
// tile east of the start. Tile count grows as Theta(k^3). Requires k >= 2.
Configuration gen_worst_case(int k);

Configuration gen_parallelogram(int width, int height);
Configuration gen_column(int length);
Configuration gen_tower(int depth);
Configuration gen_line(int length);

}  // namespace icicle
