#pragma once

// Geometry of the FCC adjacency graph in skewed integer coordinates:
// x grows from SE to NW, y from S to N, z from DSW to UNE. Each node has
// exactly twelve neighbors, named by compass direction (three upward, six
// in-plane, three downward). All algorithm logic is combinatorial on these
// integer offsets; the Euclidean embedding exists only for sphere sampling
// and sanity checks.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace icicle {

enum class Direction : std::uint8_t {
  UNE,
  UW,
  USE,
  N,
  NW,
  SW,
  S,
  SE,
  NE,
  DNW,
  DSW,
  DE,
};

inline constexpr std::size_t kDirectionCount = 12;

constexpr std::array<Direction, kDirectionCount> all_directions() {
  return {Direction::UNE, Direction::UW,  Direction::USE, Direction::N,
          Direction::NW,  Direction::SW,  Direction::S,   Direction::SE,
          Direction::NE,  Direction::DNW, Direction::DSW, Direction::DE};
}

// The six in-plane directions (z unchanged); this is the adjacency used for
// layers and fragments.
constexpr std::array<Direction, 6> plane_directions() {
  return {Direction::N,  Direction::NW, Direction::SW,
          Direction::S,  Direction::SE, Direction::NE};
}

struct Coord {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend constexpr bool operator==(const Coord& a, const Coord& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
  friend constexpr bool operator!=(const Coord& a, const Coord& b) {
    return !(a == b);
  }
  // Lexicographic (x, y, z); used for deterministic ordering only.
  friend constexpr bool operator<(const Coord& a, const Coord& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  }
  friend constexpr Coord operator+(const Coord& a, const Coord& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Coord operator-(const Coord& a, const Coord& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
};

struct CoordHash {
  std::size_t operator()(const Coord& c) const noexcept {
    // Pack into 63 bits (fine for |coordinate| < 2^20), then mix.
    auto u = [](std::int32_t v) {
      return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) &
             0x1FFFFFull;
    };
    std::uint64_t h = (u(c.x) << 42) | (u(c.y) << 21) | u(c.z);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
  }
};

using CoordSet = std::unordered_set<Coord, CoordHash>;

// Coordinate offset of one step in direction d.
Coord delta(Direction d);

// The direction with delta(opposite(d)) == -delta(d).
Direction opposite(Direction d);

inline Coord neighbor(const Coord& v, Direction d) { return v + delta(d); }

// True iff a and b are distinct nodes one step apart.
bool adjacent(const Coord& a, const Coord& b);

// If b is a neighbor of a, the direction leading from a to b.
std::optional<Direction> direction_between(const Coord& a, const Coord& b);

std::string_view direction_name(Direction d);
std::optional<Direction> direction_from_name(std::string_view name);

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Euclidean embedding with basis a1=(1,1,0), a2=(0,1,1), a3=(-1,1,0):
// every neighbor step has length sqrt(2) and distinct nodes map to distinct
// points. Closed form (x,y,z) -> (x-z, x+y+z, y).
Vec3 embed(const Coord& v);

double norm(const Vec3& v);

// Axis-aligned hull of a non-empty node set. The cylinder ignores z; the box
// bounds all three axes. height() is the cylinder's y extent.
struct Bounds {
  std::int32_t x_min = 0, x_max = 0;
  std::int32_t y_min = 0, y_max = 0;
  std::int32_t z_min = 0, z_max = 0;

  std::int64_t height() const {
    return static_cast<std::int64_t>(y_max) - y_min + 1;
  }
  std::int64_t width() const {
    return static_cast<std::int64_t>(x_max) - x_min + 1;
  }
  std::int64_t depth() const {
    return static_cast<std::int64_t>(z_max) - z_min + 1;
  }
  bool in_cylinder(const Coord& v) const {
    return v.x >= x_min && v.x <= x_max && v.y >= y_min && v.y <= y_max;
  }
  bool in_box(const Coord& v) const {
    return in_cylinder(v) && v.z >= z_min && v.z <= z_max;
  }
};

// Throws std::invalid_argument on an empty set.
Bounds bounds(const CoordSet& nodes);
Bounds bounds(const std::vector<Coord>& nodes);

// Connected component of one layer's nodes under in-plane adjacency.
struct Fragment {
  std::int32_t z = 0;
  std::vector<Coord> nodes;  // sorted by (x, y)
};

// Partition of S into per-layer connected components, ordered by ascending z
// then by each fragment's minimal (x, y); byte-stable across runs.
std::vector<Fragment> fragments(const CoordSet& s);

// Combined coordinate xy(v) = (x(v) - x_min) * h + (y(v) - y_min), taken
// against the bounding cylinder b. Zero at the cylinder's south-east corner,
// invariant along UNE/DSW, injective within a layer with range
// [0, width * h - 1]. Throws if v is outside the cylinder.
std::int64_t xy_coord(const Coord& v, const Bounds& b);

// Max hop distance between tiled nodes (BFS from every node). Throws on an
// empty or disconnected set.
int diameter(const CoordSet& tiles);

}  // namespace icicle
