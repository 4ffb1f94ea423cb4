#include "icicle/gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace icicle {

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: zero bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

std::uint64_t mix64(std::uint64_t v) {
  SplitMix64 rng(v);
  return rng.next();
}

std::uint64_t child_seed(std::uint64_t base_seed, std::uint64_t n,
                         std::uint64_t sample_index) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ (n * 0xA24BAED4963EE407ull));
  h = mix64(h ^ (sample_index * 0x9FB21C651E98DF25ull));
  return h;
}

namespace {

// All lattice nodes whose embedding lies within Euclidean distance r of the
// embedded origin, in deterministic order. The embedding is
// (x, y, z) -> (x - z, x + y + z, y), so each coordinate of the image is
// bounded by r and the scan ranges stay tight.
std::vector<Coord> ball_nodes(double r) {
  std::vector<Coord> nodes;
  const double r2 = r * r;
  const int lim = static_cast<int>(std::ceil(r)) + 1;
  for (int x = -lim; x <= lim; ++x) {
    for (int y = -lim; y <= lim; ++y) {
      for (int z = -lim; z <= lim; ++z) {
        Vec3 e = embed({x, y, z});
        if (e.x * e.x + e.y * e.y + e.z * e.z <= r2) {
          nodes.push_back({x, y, z});
        }
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

// Union-find over node indices.
struct UnionFind {
  std::vector<int> parent;
  std::vector<int> size;

  explicit UnionFind(std::size_t n) : parent(n), size(n, 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
    return a;
  }
};

}  // namespace

Configuration gen_sphere(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_sphere: n must be positive");
  const double radius = 4.0 * std::cbrt(static_cast<double>(n));
  const std::vector<Coord> nodes = ball_nodes(radius);
  if (nodes.size() < static_cast<std::size_t>(n)) {
    throw std::logic_error("gen_sphere: ball holds fewer nodes than n");
  }
  std::unordered_map<Coord, int, CoordHash> index;
  index.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index.emplace(nodes[i], static_cast<int>(i));
  }

  // Independent streams for node sampling and agent placement.
  SplitMix64 sample_rng(mix64(seed ^ 0xA5A5A5A5A5A5A5A5ull));
  SplitMix64 agent_rng(mix64(seed ^ 0x5A5A5A5A5A5A5A5Aull));

  UnionFind uf(nodes.size());
  std::vector<bool> tiled(nodes.size(), false);
  int winner = -1;
  while (winner < 0) {
    int pick;
    do {
      pick = static_cast<int>(sample_rng.below(nodes.size()));
    } while (tiled[pick]);
    tiled[pick] = true;
    int root = pick;
    for (Direction d : all_directions()) {
      auto it = index.find(neighbor(nodes[pick], d));
      if (it == index.end() || !tiled[it->second]) continue;
      root = uf.unite(root, it->second);
    }
    if (uf.size[uf.find(root)] >= n) winner = uf.find(root);
  }

  Configuration c;
  c.carrying = true;
  std::vector<Coord> component;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (tiled[i] && uf.find(static_cast<int>(i)) == winner) {
      component.push_back(nodes[i]);
      c.tiles.insert(nodes[i]);
    }
  }
  c.agent = component[agent_rng.below(component.size())];
  return c;
}

Configuration gen_worst_case(int k) {
  if (k < 2) throw std::invalid_argument("gen_worst_case: k must be >= 2");
  Configuration c;
  c.carrying = true;
  // The copies are processed bottom-up: the only way up from copy j is the
  // staircase above its F0, whose foot is the easternmost column of copy
  // j's bottom layer. BuildPar reaches that column only after the copy's
  // fragments are gone, so debris from a copy never lands on unprocessed
  // fragments below. Staircase lines drift east per copy so that the
  // search (which never moves east) cannot skip a copy.
  const int copies = 3 * k;
  for (int copy = 0; copy < copies; ++copy) {
    const int zb = 3 * copy;        // bottom connector layer
    const int zm = zb + 1;          // fragment layer
    const int zt = zb + 2;          // staircase tile toward the next copy
    const int stair = -2 - copy;
    // Bottom layer: a column under p0 and the fragments' arm tips, plus an
    // arm running east to the staircase foot.
    for (int y = 0; y <= 3 * k; ++y) c.tiles.insert({0, y, zb});
    for (int x = stair; x <= -1; ++x) c.tiles.insert({x, 0, zb});
    // Middle layer: F1 = {p0}, the single-tile F0 east of it on the
    // staircase line, and two-tile-thick L-shaped fragments drifting
    // north-west. Each box spans [0,3i]x[0,3i], so it contains p0 at its
    // south-east corner and excludes F_{i+1}; the rebuilt parallelogram
    // packs against the eastern boundary and covers p0's node, so each
    // projection drops one tile down the p0 tower line.
    c.tiles.insert({0, 0, zm});
    c.tiles.insert({stair, 0, zm});
    for (int i = 2; i <= k; ++i) {
      for (int y = 0; y <= 3 * i; ++y) {
        c.tiles.insert({3 * i, y, zm});
        c.tiles.insert({3 * i - 1, y, zm});
      }
      for (int x = 0; x <= 3 * i - 2; ++x) {
        c.tiles.insert({x, 3 * i, zm});
        c.tiles.insert({x, 3 * i - 1, zm});
      }
    }
    c.tiles.insert({stair, 0, zt});
  }
  c.agent = {0, 0, 1};  // p0 of the bottom copy
  return c;
}

Configuration gen_parallelogram(int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("gen_parallelogram: dimensions must be >= 1");
  }
  Configuration c;
  c.carrying = true;
  for (int x = 0; x < width; ++x) {
    for (int y = 0; y < height; ++y) c.tiles.insert({x, y, 0});
  }
  c.agent = {0, 0, 0};
  return c;
}

Configuration gen_column(int length) {
  if (length < 1) throw std::invalid_argument("gen_column: length must be >= 1");
  Configuration c;
  c.carrying = true;
  for (int y = 0; y < length; ++y) c.tiles.insert({0, y, 0});
  c.agent = {0, 0, 0};
  return c;
}

Configuration gen_tower(int depth) {
  if (depth < 1) throw std::invalid_argument("gen_tower: depth must be >= 1");
  Configuration c;
  c.carrying = true;
  for (int z = 0; z < depth; ++z) c.tiles.insert({0, 0, -z});
  c.agent = {0, 0, 0};
  return c;
}

Configuration gen_line(int length) {
  if (length < 1) throw std::invalid_argument("gen_line: length must be >= 1");
  Configuration c;
  c.carrying = true;
  for (int x = 0; x < length; ++x) c.tiles.insert({x, 0, 0});
  c.agent = {0, 0, 0};
  return c;
}

Configuration generate(const GenSpec& spec) {
  switch (spec.kind) {
    case GenSpec::Kind::Sphere:
      return gen_sphere(spec.n, spec.seed);
    case GenSpec::Kind::WorstCase:
      return gen_worst_case(spec.k);
    case GenSpec::Kind::Parallelogram:
      return gen_parallelogram(spec.width, spec.height);
    case GenSpec::Kind::Column:
      return gen_column(spec.length);
    case GenSpec::Kind::Tower:
      return gen_tower(spec.length);
    case GenSpec::Kind::Line:
      return gen_line(spec.length);
  }
  throw std::invalid_argument("generate: unknown kind");
}

}  // namespace icicle
