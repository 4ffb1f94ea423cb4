#pragma once

// Configuration state and the model's action semantics: a set of tiled nodes
// plus a single agent that moves, places and picks up tiles under the
// carried-tile connectivity rule.

#include <iosfwd>
#include <string>
#include <vector>

#include "icicle/lattice.hpp"

namespace icicle {

struct Configuration {
  CoordSet tiles;
  Coord agent{};
  bool carrying = true;

  bool tiled(const Coord& v) const { return tiles.find(v) != tiles.end(); }
};

enum class ActionKind : std::uint8_t { Move, Place, Pickup, Terminate };

struct Action {
  ActionKind kind = ActionKind::Terminate;
  Direction dir = Direction::UNE;  // meaningful for Move only

  static Action move(Direction d) { return {ActionKind::Move, d}; }
  static Action place() { return {ActionKind::Place, Direction::UNE}; }
  static Action pickup() { return {ActionKind::Pickup, Direction::UNE}; }
  static Action terminate() { return {ActionKind::Terminate, Direction::UNE}; }
};

std::string action_to_string(const Action& a);

// Applies one model action. Throws std::invalid_argument on a rule
// violation: Place on a tiled node or while not carrying, Pickup on an empty
// node or while carrying. Terminate leaves the configuration unchanged.
Configuration apply(const Configuration& c, const Action& a);

// Connectivity under full 12-neighbor adjacency; the empty set and
// singletons count as connected.
bool is_connected(const CoordSet& s);
bool coords_connected(const std::vector<Coord>& nodes);

// The model's connectivity constraint: tiles connected, or tiles plus the
// agent's node connected while the agent carries a tile.
bool model_connected(const Configuration& c);

// Definition-1 classification of a tiled node by the local connectivity of
// its tiled neighbors.
struct NodeClass {
  enum class Kind : std::uint8_t { Removable, Shiftable, Unmovable };
  Kind kind = Kind::Removable;
  // All valid bridge nodes, sorted; non-empty exactly for Shiftable.
  std::vector<Coord> bridges;
};

// Throws if v is not tiled. An empty tiled neighborhood counts as removable.
// Bridge candidates are the empty nodes adjacent to at least two tiled
// neighbors of v (any bridge must join two components, so the set is
// complete).
NodeClass classify(const Configuration& c, const Coord& v);

// Line-oriented text format, '#' comments:
//   agent X Y Z      (exactly one; the agent always starts carrying)
//   tile X Y Z       (one line per tile)
// The loader rejects duplicate tiles, zero or multiple agent lines, and an
// agent that is not on a tiled node.
Configuration load_configuration(std::istream& in);
Configuration load_configuration_file(const std::string& path);
void save_configuration(std::ostream& out, const Configuration& c);
void save_configuration_file(const std::string& path, const Configuration& c);

}  // namespace icicle
