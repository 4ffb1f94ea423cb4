#include "icicle/world.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace icicle {

std::string action_to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::Move:
      return std::string("move ") + std::string(direction_name(a.dir));
    case ActionKind::Place:
      return "place";
    case ActionKind::Pickup:
      return "pickup";
    case ActionKind::Terminate:
      return "terminate";
  }
  return "?";
}

Configuration apply(const Configuration& c, const Action& a) {
  Configuration next = c;
  switch (a.kind) {
    case ActionKind::Move:
      next.agent = neighbor(c.agent, a.dir);
      break;
    case ActionKind::Place:
      if (!c.carrying) {
        throw std::invalid_argument("apply: place while not carrying");
      }
      if (c.tiled(c.agent)) {
        throw std::invalid_argument("apply: place on a tiled node");
      }
      next.tiles.insert(c.agent);
      next.carrying = false;
      break;
    case ActionKind::Pickup:
      if (c.carrying) {
        throw std::invalid_argument("apply: pickup while carrying");
      }
      if (!c.tiled(c.agent)) {
        throw std::invalid_argument("apply: pickup on an empty node");
      }
      next.tiles.erase(c.agent);
      next.carrying = true;
      break;
    case ActionKind::Terminate:
      break;
  }
  return next;
}

bool is_connected(const CoordSet& s) {
  if (s.size() <= 1) return true;
  const Coord start = *s.begin();
  CoordSet seen{start};
  std::deque<Coord> queue{start};
  while (!queue.empty()) {
    Coord cur = queue.front();
    queue.pop_front();
    for (Direction d : all_directions()) {
      Coord nb = neighbor(cur, d);
      if (s.find(nb) == s.end()) continue;
      if (seen.insert(nb).second) queue.push_back(nb);
    }
  }
  return seen.size() == s.size();
}

bool model_connected(const Configuration& c) {
  if (is_connected(c.tiles)) return true;
  if (!c.carrying) return false;
  CoordSet with_agent = c.tiles;
  with_agent.insert(c.agent);
  return is_connected(with_agent);
}

bool coords_connected(const std::vector<Coord>& nodes) {
  if (nodes.size() <= 1) return true;
  CoordSet set(nodes.begin(), nodes.end());
  return is_connected(set);
}

NodeClass classify(const Configuration& c, const Coord& v) {
  if (!c.tiled(v)) {
    throw std::invalid_argument("classify: node is not tiled");
  }
  std::vector<Coord> tiled_neighbors;
  for (Direction d : all_directions()) {
    Coord nb = neighbor(v, d);
    if (c.tiled(nb)) tiled_neighbors.push_back(nb);
  }
  std::sort(tiled_neighbors.begin(), tiled_neighbors.end());

  NodeClass result;
  if (coords_connected(tiled_neighbors)) {
    result.kind = NodeClass::Kind::Removable;
    return result;
  }

  // Candidate bridges: empty nodes touching at least two tiled neighbors.
  std::unordered_map<Coord, int, CoordHash> touch;
  for (const Coord& u : tiled_neighbors) {
    for (Direction d : all_directions()) {
      Coord w = neighbor(u, d);
      if (w == v || c.tiled(w)) continue;
      ++touch[w];
    }
  }
  std::vector<Coord> bridges;
  for (const auto& [w, count] : touch) {
    if (count < 2) continue;
    std::vector<Coord> with_bridge = tiled_neighbors;
    with_bridge.push_back(w);
    if (coords_connected(with_bridge)) bridges.push_back(w);
  }
  if (!bridges.empty()) {
    std::sort(bridges.begin(), bridges.end());
    result.kind = NodeClass::Kind::Shiftable;
    result.bridges = std::move(bridges);
  } else {
    result.kind = NodeClass::Kind::Unmovable;
  }
  return result;
}

Configuration load_configuration(std::istream& in) {
  Configuration c;
  c.carrying = true;
  bool have_agent = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;  // blank / comment-only line
    Coord v;
    if (!(ls >> v.x >> v.y >> v.z)) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": expected three integer coordinates");
    }
    std::string extra;
    if (ls >> extra) {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": trailing tokens");
    }
    if (kind == "agent") {
      if (have_agent) {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": duplicate agent line");
      }
      have_agent = true;
      c.agent = v;
    } else if (kind == "tile") {
      if (!c.tiles.insert(v).second) {
        throw std::runtime_error("config line " + std::to_string(lineno) +
                                 ": duplicate tile");
      }
    } else {
      throw std::runtime_error("config line " + std::to_string(lineno) +
                               ": unknown record '" + kind + "'");
    }
  }
  if (!have_agent) throw std::runtime_error("config: missing agent line");
  if (c.tiles.empty()) throw std::runtime_error("config: no tiles");
  if (!c.tiled(c.agent)) {
    throw std::runtime_error("config: agent is not on a tiled node");
  }
  return c;
}

Configuration load_configuration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_configuration(in);
}

void save_configuration(std::ostream& out, const Configuration& c) {
  out << "agent " << c.agent.x << ' ' << c.agent.y << ' ' << c.agent.z << '\n';
  std::vector<Coord> tiles(c.tiles.begin(), c.tiles.end());
  std::sort(tiles.begin(), tiles.end());
  for (const Coord& t : tiles) {
    out << "tile " << t.x << ' ' << t.y << ' ' << t.z << '\n';
  }
}

void save_configuration_file(const std::string& path, const Configuration& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_configuration(out, c);
}

}  // namespace icicle
