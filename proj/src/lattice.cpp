#include "icicle/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace icicle {

namespace {

// Offsets per direction, indexed by Direction. Upward steps raise z by one,
// downward steps lower it; the six z=0 steps form the triangular layer grid.
constexpr std::array<Coord, kDirectionCount> kDeltas = {{
    {0, 0, 1},    // UNE
    {1, -1, 1},   // UW
    {0, -1, 1},   // USE
    {0, 1, 0},    // N
    {1, 0, 0},    // NW
    {1, -1, 0},   // SW
    {0, -1, 0},   // S
    {-1, 0, 0},   // SE
    {-1, 1, 0},   // NE
    {0, 1, -1},   // DNW
    {0, 0, -1},   // DSW
    {-1, 1, -1},  // DE
}};

constexpr std::array<Direction, kDirectionCount> kOpposites = {{
    Direction::DSW,  // UNE
    Direction::DE,   // UW
    Direction::DNW,  // USE
    Direction::S,    // N
    Direction::SE,   // NW
    Direction::NE,   // SW
    Direction::N,    // S
    Direction::NW,   // SE
    Direction::SW,   // NE
    Direction::USE,  // DNW
    Direction::UNE,  // DSW
    Direction::UW,   // DE
}};

constexpr std::array<std::string_view, kDirectionCount> kNames = {{
    "UNE", "UW", "USE", "N", "NW", "SW", "S", "SE", "NE", "DNW", "DSW", "DE",
}};

}  // namespace

Coord delta(Direction d) { return kDeltas[static_cast<std::size_t>(d)]; }

Direction opposite(Direction d) {
  return kOpposites[static_cast<std::size_t>(d)];
}

bool adjacent(const Coord& a, const Coord& b) {
  return direction_between(a, b).has_value();
}

std::optional<Direction> direction_between(const Coord& a, const Coord& b) {
  const Coord d = b - a;
  for (Direction dir : all_directions()) {
    if (delta(dir) == d) return dir;
  }
  return std::nullopt;
}

std::string_view direction_name(Direction d) {
  return kNames[static_cast<std::size_t>(d)];
}

std::optional<Direction> direction_from_name(std::string_view name) {
  for (Direction dir : all_directions()) {
    if (kNames[static_cast<std::size_t>(dir)] == name) return dir;
  }
  return std::nullopt;
}

Vec3 embed(const Coord& v) {
  return {static_cast<double>(v.x) - v.z,
          static_cast<double>(v.x) + v.y + v.z, static_cast<double>(v.y)};
}

double norm(const Vec3& v) {
  return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
}

namespace {

template <typename Range>
Bounds bounds_impl(const Range& nodes) {
  auto it = nodes.begin();
  if (it == nodes.end()) {
    throw std::invalid_argument("bounds: empty node set");
  }
  Bounds b{it->x, it->x, it->y, it->y, it->z, it->z};
  for (const Coord& c : nodes) {
    b.x_min = std::min(b.x_min, c.x);
    b.x_max = std::max(b.x_max, c.x);
    b.y_min = std::min(b.y_min, c.y);
    b.y_max = std::max(b.y_max, c.y);
    b.z_min = std::min(b.z_min, c.z);
    b.z_max = std::max(b.z_max, c.z);
  }
  return b;
}

}  // namespace

Bounds bounds(const CoordSet& nodes) { return bounds_impl(nodes); }
Bounds bounds(const std::vector<Coord>& nodes) { return bounds_impl(nodes); }

std::vector<Fragment> fragments(const CoordSet& s) {
  // Group by layer first so component search stays within one z.
  std::map<std::int32_t, std::vector<Coord>> layers;
  for (const Coord& c : s) layers[c.z].push_back(c);

  std::vector<Fragment> out;
  for (auto& [z, nodes] : layers) {
    std::sort(nodes.begin(), nodes.end());
    CoordSet unvisited(nodes.begin(), nodes.end());
    for (const Coord& start : nodes) {
      if (unvisited.find(start) == unvisited.end()) continue;
      Fragment frag;
      frag.z = z;
      std::deque<Coord> queue{start};
      unvisited.erase(start);
      while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop_front();
        frag.nodes.push_back(cur);
        for (Direction d : plane_directions()) {
          Coord nb = neighbor(cur, d);
          auto found = unvisited.find(nb);
          if (found != unvisited.end()) {
            unvisited.erase(found);
            queue.push_back(nb);
          }
        }
      }
      std::sort(frag.nodes.begin(), frag.nodes.end());
      out.push_back(std::move(frag));
    }
  }
  // Layers ascend already; within a layer, components were seeded in sorted
  // order, so each fragment's first node is its minimal (x, y).
  std::sort(out.begin(), out.end(), [](const Fragment& a, const Fragment& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.nodes.front() < b.nodes.front();
  });
  return out;
}

std::int64_t xy_coord(const Coord& v, const Bounds& b) {
  if (!b.in_cylinder(v)) {
    throw std::invalid_argument("xy_coord: node outside bounding cylinder");
  }
  // Coordinates are anchored at the cylinder's south-east corner, matching
  // the convention that the initial minimum x/y are zero.
  return (static_cast<std::int64_t>(v.x) - b.x_min) * b.height() +
         (v.y - b.y_min);
}

int diameter(const CoordSet& tiles) {
  if (tiles.empty()) {
    throw std::invalid_argument("diameter: empty tile set");
  }
  std::vector<Coord> nodes(tiles.begin(), tiles.end());
  std::sort(nodes.begin(), nodes.end());

  int max_dist = 0;
  std::unordered_map<Coord, int, CoordHash> dist;
  dist.reserve(nodes.size());
  for (const Coord& start : nodes) {
    dist.clear();
    dist[start] = 0;
    std::deque<Coord> queue{start};
    int reached = 1;
    while (!queue.empty()) {
      Coord cur = queue.front();
      queue.pop_front();
      int d = dist[cur];
      max_dist = std::max(max_dist, d);
      for (Direction dir : all_directions()) {
        Coord nb = neighbor(cur, dir);
        if (tiles.find(nb) == tiles.end()) continue;
        if (dist.emplace(nb, d + 1).second) {
          ++reached;
          queue.push_back(nb);
        }
      }
    }
    if (static_cast<std::size_t>(reached) != nodes.size()) {
      throw std::invalid_argument("diameter: tile set is disconnected");
    }
  }
  return max_dist;
}

}  // namespace icicle
