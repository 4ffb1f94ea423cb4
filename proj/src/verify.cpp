#include "icicle/verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace icicle {

namespace {

constexpr std::array<Direction, 6> kExitCandidates = {
    Direction::DSW, Direction::DNW, Direction::DE,
    Direction::S,   Direction::SE,  Direction::NE};

std::int64_t sum_xy(const CoordSet& tiles) {
  const Bounds b = bounds(tiles);
  std::int64_t sum = 0;
  for (const Coord& v : tiles) sum += xy_coord(v, b);
  return sum;
}

bool fragment_is_platform(const Fragment& f, const CoordSet& tiles) {
  for (const Coord& v : f.nodes) {
    for (Direction d : {Direction::UW, Direction::USE, Direction::UNE}) {
      if (tiles.find(neighbor(v, d)) != tiles.end()) return false;
    }
  }
  return true;
}

void require_fragment_of(const Fragment& f, const CoordSet& tiles) {
  if (f.nodes.empty()) {
    throw std::invalid_argument("p1_p2_p3: empty fragment");
  }
  CoordSet members(f.nodes.begin(), f.nodes.end());
  for (const Coord& v : f.nodes) {
    if (v.z != f.z) throw std::invalid_argument("p1_p2_p3: mixed layers");
    if (tiles.find(v) == tiles.end()) {
      throw std::invalid_argument("p1_p2_p3: fragment node is not tiled");
    }
  }
  // Connected and maximal within its layer.
  std::vector<Coord> nodes(f.nodes.begin(), f.nodes.end());
  CoordSet seen{nodes.front()};
  std::vector<Coord> stack{nodes.front()};
  while (!stack.empty()) {
    Coord cur = stack.back();
    stack.pop_back();
    for (Direction d : plane_directions()) {
      Coord nb = neighbor(cur, d);
      if (members.find(nb) == members.end()) {
        if (tiles.find(nb) != tiles.end()) {
          throw std::invalid_argument("p1_p2_p3: fragment is not maximal");
        }
        continue;
      }
      if (seen.insert(nb).second) stack.push_back(nb);
    }
  }
  if (seen.size() != members.size()) {
    throw std::invalid_argument("p1_p2_p3: fragment is not connected");
  }
}

}  // namespace

std::array<bool, 3> p1_p2_p3(const Fragment& f, const CoordSet& tiles) {
  require_fragment_of(f, tiles);
  const Bounds cyl = bounds(tiles);

  const bool p1 = fragment_is_platform(f, tiles);

  std::unordered_set<std::int64_t> covered;
  std::int64_t max_xy = 0;
  for (const Coord& v : f.nodes) {
    std::int64_t c = xy_coord(v, cyl);
    covered.insert(c);
    max_xy = std::max(max_xy, c);
  }
  bool p2 = true;
  for (const Coord& v : tiles) {
    if (covered.find(xy_coord(v, cyl)) == covered.end()) {
      p2 = false;
      break;
    }
  }
  bool p3 = true;
  for (std::int64_t i = 0; i <= max_xy; ++i) {
    if (covered.find(i) == covered.end()) {
      p3 = false;
      break;
    }
  }
  return {p1, p2, p3};
}

bool icicle_by_fragment(const CoordSet& tiles) {
  for (const Fragment& f : fragments(tiles)) {
    auto p = p1_p2_p3(f, tiles);
    if (!(p[0] && p[1] && p[2])) continue;
    CoordSet members(f.nodes.begin(), f.nodes.end());
    bool rest_supported = true;
    for (const Coord& v : tiles) {
      if (members.find(v) != members.end()) continue;
      if (tiles.find(neighbor(v, Direction::UNE)) == tiles.end()) {
        rest_supported = false;
        break;
      }
    }
    if (rest_supported) return true;
  }
  return false;
}

bool is_partially_filled_parallelogram(const CoordSet& tiles) {
  if (tiles.empty()) return false;
  const std::int32_t z0 = tiles.begin()->z;
  // Column decomposition: per x, the tiles' y values.
  std::map<std::int32_t, std::vector<std::int32_t>> columns;
  for (const Coord& v : tiles) {
    if (v.z != z0) return false;
    columns[v.x].push_back(v.y);
  }
  std::optional<std::int32_t> south_y;
  std::optional<std::size_t> full_len;
  std::int32_t prev_x = 0;
  bool first = true;
  for (auto& [x, ys] : columns) {
    if (!first && x != prev_x + 1) return false;  // columns must be adjacent
    prev_x = x;
    first = false;
    std::sort(ys.begin(), ys.end());
    for (std::size_t i = 1; i < ys.size(); ++i) {
      if (ys[i] != ys[i - 1] + 1) return false;  // gap within a column
    }
    if (south_y && ys.front() != *south_y) return false;  // southern row
    south_y = ys.front();
    // Iteration runs west (max x) last only if we order descending; with the
    // ascending map order the westernmost column is the final entry, so
    // defer its size check.
    if (std::next(columns.find(x)) != columns.end()) {
      if (full_len && ys.size() != *full_len) return false;
      full_len = ys.size();
    } else {
      if (full_len && ys.size() > *full_len) return false;
    }
  }
  return true;
}

bool icicle_by_towers(const CoordSet& tiles) {
  if (tiles.empty()) return false;
  CoordSet tops;
  std::optional<std::int32_t> top_z;
  for (const Coord& v : tiles) {
    if (tiles.find(neighbor(v, Direction::UNE)) != tiles.end()) continue;
    if (top_z && v.z != *top_z) return false;  // tops must share one layer
    top_z = v.z;
    tops.insert(v);
  }
  return is_partially_filled_parallelogram(tops);
}

bool is_icicle(const CoordSet& tiles) {
  if (!is_connected(tiles)) {
    throw std::invalid_argument("is_icicle: tile set is disconnected");
  }
  const bool a = icicle_by_fragment(tiles);
  const bool b = icicle_by_towers(tiles);
  if (a != b) {
    std::ostringstream msg;
    msg << "is_icicle: checker disagreement (fragment=" << a
        << ", towers=" << b << ") on " << tiles.size() << " tiles:";
    std::vector<Coord> sorted(tiles.begin(), tiles.end());
    std::sort(sorted.begin(), sorted.end());
    for (const Coord& v : sorted) {
      msg << " (" << v.x << ',' << v.y << ',' << v.z << ')';
    }
    throw std::logic_error(msg.str());
  }
  return a;
}

PhiBreakdown phi(const CoordSet& tiles) {
  if (tiles.empty()) {
    throw std::invalid_argument("phi: empty tile set");
  }
  PhiBreakdown out;
  out.sum_xy = sum_xy(tiles);
  for (const Fragment& f : fragments(tiles)) {
    if (fragment_is_platform(f, tiles)) ++out.platform_count;
  }
  out.phi = out.sum_xy + out.platform_count;
  return out;
}

std::int64_t psi(const CoordSet& tiles) {
  if (tiles.empty()) {
    throw std::invalid_argument("psi: empty tile set");
  }
  const Bounds box = bounds(tiles);
  // Group tiles by (x, y); a column with lowest tile at z_low contributes the
  // empty slots in (z_low, z_max], each of which has that tile below it.
  struct ColumnInfo {
    std::int32_t z_low;
    std::int64_t count;
  };
  std::unordered_map<std::uint64_t, ColumnInfo> cols;
  auto key = [](const Coord& v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.x)) << 32) |
           static_cast<std::uint32_t>(v.y);
  };
  for (const Coord& v : tiles) {
    auto [it, fresh] = cols.try_emplace(key(v), ColumnInfo{v.z, 0});
    if (!fresh) it->second.z_low = std::min(it->second.z_low, v.z);
    ++it->second.count;
  }
  std::int64_t total = 0;
  for (const auto& [k, info] : cols) {
    total += (static_cast<std::int64_t>(box.z_max) - info.z_low) -
             (info.count - 1);
  }
  return total;
}

CensusTable census() {
  CensusTable table;
  for (std::uint8_t mask = 0;; ++mask) {
    CensusEntry entry;
    entry.mask = mask;
    Configuration c;
    c.agent = Coord{0, 0, 0};
    c.carrying = true;
    c.tiles.insert(c.agent);
    for (std::size_t i = 0; i < kExitCandidates.size(); ++i) {
      if (mask & (1u << i)) {
        entry.tiled.push_back(kExitCandidates[i]);
        c.tiles.insert(neighbor(c.agent, kExitCandidates[i]));
      }
    }
    entry.kind = classify(c, c.agent).kind;
    entry.dispatch = dispatch_case(c, c.agent);
    switch (entry.kind) {
      case NodeClass::Kind::Removable:
        ++table.removable;
        break;
      case NodeClass::Kind::Shiftable:
        ++table.shiftable;
        break;
      case NodeClass::Kind::Unmovable:
        ++table.unmovable;
        break;
    }
    table.entries.push_back(std::move(entry));
    if (mask == 63) break;
  }
  return table;
}

void RunRecorder::on_step(const Engine& engine, const StepRecord& record) {
  trace_.push_back(record);
  if (record.search_exit) {
    // The exiting action is a move, so the tile set equals the paper's C^i.
    PotentialSample s;
    s.step = record.index;
    PhiBreakdown pb = phi(engine.config().tiles);
    s.sum_xy = pb.sum_xy;
    s.platform_count = pb.platform_count;
    s.phi = pb.phi;
    s.psi = psi(engine.config().tiles);
    samples_.push_back(s);
  }
}

namespace {

// Connectivity bookkeeping for the replay: recomputes lazily around tile
// events, with a local shortcut for pickups whose tiled neighborhood stays
// connected on its own.
bool pickup_keeps_connected(const CoordSet& tiles, const Coord& removed) {
  std::vector<Coord> nbs;
  for (Direction d : all_directions()) {
    Coord nb = neighbor(removed, d);
    if (tiles.find(nb) != tiles.end()) nbs.push_back(nb);
  }
  return coords_connected(nbs);
}

struct Replay {
  Configuration cfg;
  Bounds cyl0;
  std::size_t budget;
  std::int64_t anchor_count = 0;
  bool tiles_connected = true;
  std::optional<std::uint64_t> disconnected_since;
};

}  // namespace

std::vector<Violation> check_trace(const Configuration& initial,
                                   const std::vector<StepRecord>& trace,
                                   const std::vector<PotentialSample>& samples) {
  std::vector<Violation> out;
  auto flag = [&out](std::string monitor, std::uint64_t step,
                     std::string detail, std::vector<Coord> nodes = {}) {
    out.push_back(Violation{std::move(monitor), step, std::move(detail),
                            std::move(nodes)});
  };

  if (initial.tiles.empty() || !initial.tiled(initial.agent) ||
      !initial.carrying) {
    flag("malformed", 0, "initial configuration violates the preconditions");
    return out;
  }

  Replay r;
  r.cfg = initial;
  r.cyl0 = bounds(initial.tiles);
  r.budget = initial.tiles.size() + 1;
  for (const Coord& v : initial.tiles) {
    if (v.x == r.cyl0.x_min) ++r.anchor_count;
  }
  r.tiles_connected = is_connected(initial.tiles);
  if (!r.tiles_connected) {
    flag("malformed", 0, "initial tile set is disconnected");
    return out;
  }

  std::optional<std::int64_t> prev_phi;
  std::int64_t prev_psi = 0;
  bool psi_armed = false;
  bool onset = false;
  bool shifted_since_exit = false;
  bool proj_since_exit = false;
  bool proj_active = false;
  std::int64_t proj_sum_before = 0;
  std::uint64_t proj_start_step = 0;
  std::size_t sample_idx = 0;

  for (const StepRecord& rec : trace) {
    // Projection span boundaries (checked against the pre-step state).
    if (proj_active && rec.kind != StepKind::Proj) {
      std::int64_t now = sum_xy(r.cfg.tiles);
      if (now != proj_sum_before) {
        flag("sigma-xy", rec.index,
             "projection changed sum of xy from " +
                 std::to_string(proj_sum_before) + " to " +
                 std::to_string(now));
      }
      proj_active = false;
    }
    if (!proj_active && rec.kind == StepKind::Proj) {
      proj_active = true;
      proj_start_step = rec.index;
      proj_sum_before = sum_xy(r.cfg.tiles);
    }

    const Coord agent_before = r.cfg.agent;
    try {
      r.cfg = apply(r.cfg, rec.action);
    } catch (const std::exception& e) {
      flag("malformed", rec.index, e.what());
      return out;
    }
    if (rec.action.kind == ActionKind::Move && r.cfg.agent != rec.pos_after) {
      flag("malformed", rec.index, "trace position does not match replay");
      return out;
    }

    if (rec.action.kind == ActionKind::Place) {
      if (agent_before.x < r.cyl0.x_min || agent_before.x > r.cyl0.x_max ||
          agent_before.y < r.cyl0.y_min || agent_before.y > r.cyl0.y_max) {
        flag("cylinder", rec.index,
             "tile placed outside the initial bounding cylinder",
             {agent_before});
      }
      if (agent_before.x == r.cyl0.x_min) ++r.anchor_count;
      if (r.tiles_connected) {
        bool attached = false;
        for (Direction d : all_directions()) {
          if (r.cfg.tiled(neighbor(agent_before, d))) {
            attached = true;
            break;
          }
        }
        if (!attached && r.cfg.tiles.size() > 1) r.tiles_connected = false;
      } else {
        r.tiles_connected = is_connected(r.cfg.tiles);
      }
    } else if (rec.action.kind == ActionKind::Pickup) {
      if (agent_before.x == r.cyl0.x_min) --r.anchor_count;
      if (r.tiles_connected) {
        if (!pickup_keeps_connected(r.cfg.tiles, agent_before)) {
          r.tiles_connected = is_connected(r.cfg.tiles);
        }
      } else {
        r.tiles_connected = is_connected(r.cfg.tiles);
      }
    }

    if (r.cfg.tiles.size() + (r.cfg.carrying ? 1 : 0) != r.budget) {
      flag("tile-conservation", rec.index,
           "tile count plus carried tile changed");
    }
    if (r.anchor_count <= 0) {
      flag("western-anchor", rec.index,
           "no tiled node keeps the initial minimum x-coordinate");
    }

    // Connectivity window (Lemma 1) plus the model constraint inside it.
    if (!r.tiles_connected) {
      if (!r.disconnected_since) r.disconnected_since = rec.index;
      CoordSet with_agent = r.cfg.tiles;
      with_agent.insert(r.cfg.agent);
      if (!r.cfg.carrying || !is_connected(with_agent)) {
        flag("model-connectivity", rec.index,
             "tiles disconnected and agent+carried tile does not reconnect");
      }
      if (rec.index - *r.disconnected_since >= 4) {
        flag("connectivity-window", rec.index,
             "tile set stayed disconnected for more than 4 steps");
        r.disconnected_since = rec.index;  // report once per window overrun
      }
    } else {
      r.disconnected_since.reset();
    }

    if (rec.action.kind == ActionKind::Place ||
        rec.action.kind == ActionKind::Pickup) {
      shifted_since_exit = true;
    }
    if (rec.kind == StepKind::Proj) proj_since_exit = true;

    if (rec.search_exit) {
      PhiBreakdown pb = phi(r.cfg.tiles);
      std::int64_t psi_now = psi(r.cfg.tiles);
      if (!samples.empty()) {
        if (sample_idx >= samples.size() ||
            samples[sample_idx].step != rec.index ||
            samples[sample_idx].phi != pb.phi ||
            samples[sample_idx].sum_xy != pb.sum_xy ||
            samples[sample_idx].platform_count != pb.platform_count ||
            samples[sample_idx].psi != psi_now) {
          flag("snapshot", rec.index,
               "recorded potential sample disagrees with replay");
        }
        if (sample_idx < samples.size()) ++sample_idx;
      }
      if (pb.phi < 0) {
        flag("phi", rec.index, "phi is negative: " + std::to_string(pb.phi));
      }
      if (prev_phi) {
        if (pb.phi > *prev_phi) {
          flag("phi", rec.index,
               "phi increased from " + std::to_string(*prev_phi) + " to " +
                   std::to_string(pb.phi));
        } else if (pb.phi == *prev_phi && shifted_since_exit &&
                   !proj_since_exit) {
          flag("phi", rec.index,
               "phi stalled across a tile shift without a projection");
        }
      }
      prev_phi = pb.phi;

      if (!r.cfg.tiled(rec.pos_before)) {
        flag("malformed", rec.index, "search exit from an empty node");
      } else {
        Fragment agent_fragment;
        agent_fragment.z = rec.pos_before.z;
        CoordSet seen{rec.pos_before};
        std::vector<Coord> stack{rec.pos_before};
        while (!stack.empty()) {
          Coord cur = stack.back();
          stack.pop_back();
          agent_fragment.nodes.push_back(cur);
          for (Direction d : plane_directions()) {
            Coord nb = neighbor(cur, d);
            if (!r.cfg.tiled(nb)) continue;
            if (seen.insert(nb).second) stack.push_back(nb);
          }
        }
        std::sort(agent_fragment.nodes.begin(), agent_fragment.nodes.end());
        auto p = p1_p2_p3(agent_fragment, r.cfg.tiles);
        const bool all = p[0] && p[1] && p[2];
        if (onset && !all) {
          flag("p1p3-persistence", rec.index,
               "agent fragment lost P1-P3 after onset");
        }
        if (onset && psi_armed && prev_psi > 0 && psi_now >= prev_psi) {
          flag("psi", rec.index,
               "psi did not strictly decrease: " + std::to_string(prev_psi) +
                   " -> " + std::to_string(psi_now));
        }
        if (!onset && all) onset = true;
        if (onset) {
          prev_psi = psi_now;
          psi_armed = true;
        }
      }
      shifted_since_exit = false;
      proj_since_exit = false;
    }

    if (rec.action.kind == ActionKind::Terminate) {
      try {
        if (!is_icicle(r.cfg.tiles)) {
          flag("termination-soundness", rec.index,
               "terminated on a configuration that is not an icicle");
        }
      } catch (const std::exception& e) {
        flag("termination-soundness", rec.index, e.what());
      }
    }
  }

  if (proj_active) {
    std::int64_t now = sum_xy(r.cfg.tiles);
    if (now != proj_sum_before) {
      flag("sigma-xy", proj_start_step,
           "projection changed sum of xy from " +
               std::to_string(proj_sum_before) + " to " + std::to_string(now));
    }
  }
  return out;
}

std::vector<Violation> check_recorded_run(const RunRecorder& recorder) {
  return check_trace(recorder.initial(), recorder.trace(), recorder.samples());
}

}  // namespace icicle
