#include "icicle/engine.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace icicle {

namespace {

constexpr std::array<Direction, 6> kSearch3D = {
    Direction::UW, Direction::USE, Direction::UNE,
    Direction::NW, Direction::SW,  Direction::N};
constexpr std::array<Direction, 3> kSearch2D = {Direction::NW, Direction::SW,
                                                Direction::N};
constexpr std::array<Direction, 3> kUpward = {Direction::UW, Direction::USE,
                                              Direction::UNE};

// Candidate directions that may hold tiles at a search exit.
constexpr std::array<Direction, 6> kExitCandidates = {
    Direction::DSW, Direction::DNW, Direction::DE,
    Direction::S,   Direction::SE,  Direction::NE};

constexpr std::array<std::string_view, 47> kPhaseNames = {
    "search",          "bp_scan",         "bp_place_east",
    "bp_ret_nw",       "bp_place_above",  "bp_ret_sw",
    "bp_placed_below", "bp_enter_next",   "bp_climb_next",
    "bp_full_climb_n", "bp_descend_nw",   "rfp_climb_n",
    "rfp_path",        "post_pickup",
    "project_enter",   "proj_climb_n",    "proj_descend",
    "proj_ascend",     "proj_next",       "proj_h1_descend",
    "proj_h1_ascend",  "proj_h1_next",    "proj_h1_step2",
    "post_project",    "case_c_approach", "case_c_at_se",
    "case_c_at_target", "case_c_placed",  "case_c_at_se2",
    "case_c_at_v",     "case_c_picked",   "case_b_approach",
    "case_b_at_bridge", "case_b_placed",  "case_b_at_v",
    "case_b_picked",   "case_b_traverse", "case_d_march",
    "case_d_chain_top", "case_d_at_de",   "case_d_placed",
    "case_d_back",     "case_d_chain",    "case_d_repos",
    "case_e_march",    "case_e_walk",     "terminated",
};

// Deterministic shortest path from one tiled node to another, walking tiled
// nodes only; neighbors expand in the fixed direction order, so the result
// is unique. Throws if the nodes are in different components.
std::vector<Direction> tiled_path(const CoordSet& tiles, const Coord& from,
                                  const Coord& to) {
  std::vector<Direction> path;
  if (from == to) return path;
  std::unordered_map<Coord, Direction, CoordHash> arrived;
  arrived.emplace(from, Direction::UNE);  // placeholder for the start
  std::deque<Coord> queue{from};
  while (!queue.empty()) {
    Coord cur = queue.front();
    queue.pop_front();
    for (Direction d : all_directions()) {
      Coord nb = neighbor(cur, d);
      if (tiles.find(nb) == tiles.end()) continue;
      if (!arrived.emplace(nb, d).second) continue;
      if (nb == to) {
        for (Coord n = to; n != from;) {
          Direction step = arrived.at(n);
          path.push_back(step);
          n = neighbor(n, opposite(step));
        }
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(nb);
    }
  }
  throw EngineLogicError("return walk: no tiled path to the pickup node");
}

bool is_projection_phase(Phase p) {
  switch (p) {
    case Phase::ProjClimbN:
    case Phase::ProjDescend:
    case Phase::ProjAscend:
    case Phase::ProjNext:
    case Phase::ProjH1Descend:
    case Phase::ProjH1Ascend:
    case Phase::ProjH1Next:
    case Phase::ProjH1Step2:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string_view phase_name(Phase p) {
  return kPhaseNames[static_cast<std::size_t>(p)];
}

std::string_view step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Proj:
      return "proj";
    case StepKind::Shift:
      return "shift";
    case StepKind::Other:
      return "other";
  }
  return "?";
}

std::string_view dispatch_case_name(DispatchCase c) {
  switch (c) {
    case DispatchCase::BuildPar:
      return "buildpar";
    case DispatchCase::Case2Shift:
      return "case2-de-shift";
    case DispatchCase::Case3Probe:
      return "case3-probe";
    case DispatchCase::Case4Chain:
      return "case4-chain";
    case DispatchCase::Case5Chain:
      return "case5-chain";
  }
  return "?";
}

DispatchCase dispatch_case(const Configuration& c, const Coord& v) {
  for (Direction d : kSearch3D) {
    if (c.tiled(neighbor(v, d))) {
      throw std::invalid_argument(
          "dispatch_case: node is not a search exit (tile at " +
          std::string(direction_name(d)) + ")");
    }
  }
  std::uint8_t mask = 0;
  std::vector<Coord> tiled;
  for (std::size_t i = 0; i < kExitCandidates.size(); ++i) {
    Coord nb = neighbor(v, kExitCandidates[i]);
    if (c.tiled(nb)) {
      mask |= static_cast<std::uint8_t>(1u << i);
      tiled.push_back(nb);
    }
  }
  auto mask_of = [](std::initializer_list<Direction> dirs) {
    std::uint8_t m = 0;
    for (Direction d : dirs) {
      for (std::size_t i = 0; i < kExitCandidates.size(); ++i) {
        if (kExitCandidates[i] == d) m |= static_cast<std::uint8_t>(1u << i);
      }
    }
    return m;
  };

  if (coords_connected(tiled)) return DispatchCase::BuildPar;
  {
    std::vector<Coord> with_se = tiled;
    with_se.push_back(neighbor(v, Direction::SE));
    if (coords_connected(with_se)) return DispatchCase::BuildPar;
  }
  if (mask == mask_of({Direction::DSW, Direction::SE})) {
    return DispatchCase::Case3Probe;
  }
  {
    std::vector<Coord> with_de = tiled;
    with_de.push_back(neighbor(v, Direction::DE));
    if (coords_connected(with_de)) return DispatchCase::Case2Shift;
  }
  if (mask == mask_of({Direction::DNW, Direction::S, Direction::NE})) {
    return DispatchCase::Case4Chain;
  }
  if (mask == mask_of({Direction::DNW, Direction::S})) {
    return DispatchCase::Case5Chain;
  }
  std::ostringstream msg;
  msg << "dispatch_case: unhandled search-exit neighborhood {";
  for (std::size_t i = 0; i < kExitCandidates.size(); ++i) {
    if (mask & (1u << i)) msg << ' ' << direction_name(kExitCandidates[i]);
  }
  msg << " } at (" << v.x << ',' << v.y << ',' << v.z << ")";
  throw EngineLogicError(msg.str());
}

struct Engine::Observation {
  bool self = false;
  std::array<bool, kDirectionCount> dir{};

  bool at(Direction d) const { return dir[static_cast<std::size_t>(d)]; }
};

struct Engine::Emit {
  Action action;
  Phase computed_in = Phase::Terminated;
  Phase next = Phase::Terminated;
  bool end_shift = false;  // clear the shift flag after this action
  bool is_epsilon = false;  // phase change only; no action chosen yet
};

Engine::Engine(Configuration c, Mode mode) : cfg_(std::move(c)), mode_(mode) {
  std::vector<std::string> problems;
  if (cfg_.tiles.empty()) problems.push_back("no tiles");
  if (!cfg_.carrying) problems.push_back("agent does not carry a tile");
  if (!cfg_.tiles.empty() && !cfg_.tiled(cfg_.agent)) {
    problems.push_back("agent is not on a tiled node");
  }
  if (!is_connected(cfg_.tiles)) problems.push_back("tiles are disconnected");
  if (mode_ == Mode::Parallelogram2D && !cfg_.tiles.empty()) {
    const std::int32_t z0 = cfg_.tiles.begin()->z;
    for (const Coord& t : cfg_.tiles) {
      if (t.z != z0) {
        problems.push_back("input is not planar (single z layer required)");
        break;
      }
    }
  }
  if (!problems.empty()) {
    std::string msg = "engine init:";
    for (const auto& p : problems) msg += " [" + p + "]";
    throw std::invalid_argument(msg);
  }
  tile_budget_ = cfg_.tiles.size() + 1;
}

// The single-step transition function: one (phase, observation) case
// analysis per call. An Emit with action kind Terminate and next phase
// Terminated ends the run; a returned phase change without an action is
// signalled by computed_in == Terminated (epsilon), handled by step().
Engine::Emit Engine::compute(const Observation& obs, bool& exited_search) {
  const auto epsilon = [this](Phase next) {
    phase_ = next;
    Emit e;
    e.next = next;
    e.is_epsilon = true;
    return e;
  };
  const auto emit = [this](Phase computed_in, Action a, Phase next) {
    Emit e;
    e.action = a;
    e.computed_in = computed_in;
    e.next = next;
    return e;
  };
  const auto first_tiled = [&obs](std::initializer_list<Direction> dirs)
      -> std::optional<Direction> {
    for (Direction d : dirs) {
      if (obs.at(d)) return d;
    }
    return std::nullopt;
  };
  // True iff among `checked` exactly S is tiled (the D/E march condition).
  const auto only_s_tiled = [&obs](std::initializer_list<Direction> checked) {
    for (Direction d : checked) {
      if (d == Direction::S) {
        if (!obs.at(d)) return false;
      } else if (obs.at(d)) {
        return false;
      }
    }
    return true;
  };

  switch (phase_) {
    case Phase::Search: {
      if (mode_ == Mode::Icicle3D) {
        for (Direction d : kSearch3D) {
          if (obs.at(d)) return emit(Phase::Search, Action::move(d), Phase::Search);
        }
      } else {
        for (Direction d : kSearch2D) {
          if (obs.at(d)) return emit(Phase::Search, Action::move(d), Phase::Search);
        }
      }
      exited_search = true;
      if (mode_ == Mode::Parallelogram2D) {
        first_column_ = true;
        bp_anchor_ = cfg_.agent;
        return epsilon(Phase::BPScan);
      }
      switch (dispatch_case(cfg_, cfg_.agent)) {
        case DispatchCase::BuildPar:
          first_column_ = true;
          bp_anchor_ = cfg_.agent;
          return epsilon(Phase::BPScan);
        case DispatchCase::Case3Probe:
          return epsilon(Phase::CaseCApproach);
        case DispatchCase::Case2Shift:
          return epsilon(Phase::CaseBApproach);
        case DispatchCase::Case4Chain:
          case_e_ = false;
          return epsilon(Phase::CaseDMarch);
        case DispatchCase::Case5Chain:
          case_e_ = true;
          return epsilon(Phase::CaseEMarch);
      }
      throw EngineLogicError("search: dispatch fell through");
    }

    case Phase::BPScan: {
      if (!obs.self) {
        // Empty node south of the current column.
        if (obs.at(Direction::N) && obs.at(Direction::NE) &&
            obs.at(Direction::SE)) {
          in_shift_ = true;
          return emit(Phase::BPScan, Action::place(), Phase::BPPlacedBelow);
        }
        if (obs.at(Direction::NE)) {
          return emit(Phase::BPScan, Action::move(Direction::NE),
                      Phase::BPEnterNext);
        }
        // Fully traversed without violations: S of the easternmost column.
        if (mode_ == Mode::Parallelogram2D) {
          return emit(Phase::BPScan, Action::terminate(), Phase::Terminated);
        }
        return emit(Phase::BPScan, Action::move(Direction::N),
                    Phase::ProjectEnter);
      }
      if (auto d = first_tiled({Direction::UW, Direction::USE, Direction::UNE})) {
        return emit(Phase::BPScan, Action::move(*d), Phase::Search);
      }
      if (first_column_ && obs.at(Direction::SW)) {
        return emit(Phase::BPScan, Action::move(Direction::SW), Phase::Search);
      }
      if (obs.at(Direction::NE) && !obs.at(Direction::SE)) {
        in_shift_ = true;
        return emit(Phase::BPScan, Action::move(Direction::SE),
                    Phase::BPPlaceEast);
      }
      if (obs.at(Direction::N) && obs.at(Direction::SE) &&
          !obs.at(Direction::NE)) {
        in_shift_ = true;
        return emit(Phase::BPScan, Action::move(Direction::NE),
                    Phase::BPPlaceAbove);
      }
      return emit(Phase::BPScan, Action::move(Direction::S), Phase::BPScan);
    }

    case Phase::BPPlaceEast:
      return emit(Phase::BPPlaceEast, Action::place(), Phase::BPRetNW);
    case Phase::BPRetNW:
      rfp_path_ready_ = false;
      return emit(Phase::BPRetNW, Action::move(Direction::NW),
                  first_column_ ? Phase::RFPClimbN : Phase::RFPPath);
    case Phase::BPPlaceAbove:
      return emit(Phase::BPPlaceAbove, Action::place(), Phase::BPRetSW);
    case Phase::BPRetSW:
      rfp_path_ready_ = false;
      return emit(Phase::BPRetSW, Action::move(Direction::SW),
                  first_column_ ? Phase::RFPClimbN : Phase::RFPPath);
    case Phase::BPPlacedBelow:
      rfp_path_ready_ = false;
      return emit(Phase::BPPlacedBelow, Action::move(Direction::N),
                  first_column_ ? Phase::RFPClimbN : Phase::RFPPath);

    case Phase::BPEnterNext:
      first_column_ = false;
      return emit(Phase::BPEnterNext, Action::move(Direction::N),
                  Phase::BPClimbNext);

    case Phase::BPClimbNext: {
      if (!obs.self) {
        // Empty node N of the next column.
        if (obs.at(Direction::S) && obs.at(Direction::SE)) {
          in_shift_ = true;
          rfp_path_ready_ = false;
          return emit(Phase::BPClimbNext, Action::place(),
                      first_column_ ? Phase::RFPClimbN : Phase::RFPPath);
        }
        return emit(Phase::BPClimbNext, Action::move(Direction::S),
                    Phase::BPScan);
      }
      if (!obs.at(Direction::SW) && obs.at(Direction::NW)) {
        return epsilon(Phase::BPFullClimbN);
      }
      return emit(Phase::BPClimbNext, Action::move(Direction::N),
                  Phase::BPClimbNext);
    }

    case Phase::BPFullClimbN:
      if (obs.at(Direction::N)) {
        return emit(Phase::BPFullClimbN, Action::move(Direction::N),
                    Phase::BPFullClimbN);
      }
      return epsilon(Phase::BPDescendNW);

    case Phase::BPDescendNW:
      if (!obs.at(Direction::NW)) {
        return emit(Phase::BPDescendNW, Action::move(Direction::S),
                    Phase::BPDescendNW);
      }
      return epsilon(Phase::Search);

    case Phase::RFPClimbN:
      if (obs.at(Direction::N)) {
        return emit(Phase::RFPClimbN, Action::move(Direction::N),
                    Phase::RFPClimbN);
      }
      {
        Emit e = emit(Phase::RFPClimbN, Action::pickup(), Phase::PostPickup);
        e.end_shift = true;
        return e;
      }

    case Phase::RFPPath: {
      if (!rfp_path_ready_) {
        rfp_path_ = tiled_path(cfg_.tiles, cfg_.agent, bp_anchor_);
        rfp_cursor_ = 0;
        rfp_path_ready_ = true;
      }
      if (rfp_cursor_ < rfp_path_.size()) {
        return emit(Phase::RFPPath, Action::move(rfp_path_[rfp_cursor_++]),
                    Phase::RFPPath);
      }
      if (cfg_.agent != bp_anchor_) {
        throw EngineLogicError("return walk missed the pickup node");
      }
      Emit e = emit(Phase::RFPPath, Action::pickup(), Phase::PostPickup);
      e.end_shift = true;
      return e;
    }

    case Phase::PostPickup: {
      if (auto d = first_tiled({Direction::S, Direction::SE, Direction::NE})) {
        return emit(Phase::PostPickup, Action::move(*d), Phase::Search);
      }
      throw EngineLogicError("post-pickup: no tile at S, SE or NE");
    }

    case Phase::ProjectEnter: {
      // Projection start: arm the termination latch and remember the
      // fragment's nodes for the duration of the projection.
      term_ = true;
      proj_fragment_.clear();
      std::deque<Coord> queue{cfg_.agent};
      proj_fragment_.insert(cfg_.agent);
      while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop_front();
        for (Direction d : plane_directions()) {
          Coord nb = neighbor(cur, d);
          if (!cfg_.tiled(nb)) continue;
          if (proj_fragment_.insert(nb).second) queue.push_back(nb);
        }
      }
      if (!obs.at(Direction::N) && !obs.at(Direction::S)) {
        return epsilon(Phase::ProjH1Descend);
      }
      return epsilon(Phase::ProjClimbN);
    }

    case Phase::ProjClimbN:
      if (obs.at(Direction::N)) {
        return emit(Phase::ProjClimbN, Action::move(Direction::N),
                    Phase::ProjClimbN);
      }
      return epsilon(Phase::ProjDescend);

    case Phase::ProjDescend:
      if (obs.self) {
        return emit(Phase::ProjDescend, Action::move(Direction::DSW),
                    Phase::ProjDescend);
      }
      return emit(Phase::ProjDescend, Action::place(), Phase::ProjAscend);

    case Phase::ProjAscend:
      if (obs.at(Direction::UNE)) {
        return emit(Phase::ProjAscend, Action::move(Direction::UNE),
                    Phase::ProjAscend);
      }
      return emit(Phase::ProjAscend, Action::pickup(), Phase::ProjNext);

    case Phase::ProjNext:
      if (obs.at(Direction::S)) {
        return emit(Phase::ProjNext, Action::move(Direction::S),
                    Phase::ProjClimbN);
      }
      if (obs.at(Direction::NW)) {
        return emit(Phase::ProjNext, Action::move(Direction::NW),
                    Phase::ProjClimbN);
      }
      return emit(Phase::ProjNext, Action::move(Direction::DSW),
                  Phase::PostProject);

    case Phase::ProjH1Descend:
      if (obs.self) {
        return emit(Phase::ProjH1Descend, Action::move(Direction::DSW),
                    Phase::ProjH1Descend);
      }
      return emit(Phase::ProjH1Descend, Action::place(), Phase::ProjH1Ascend);

    case Phase::ProjH1Ascend:
      if (obs.at(Direction::UNE)) {
        return emit(Phase::ProjH1Ascend, Action::move(Direction::UNE),
                    Phase::ProjH1Ascend);
      }
      return emit(Phase::ProjH1Ascend, Action::pickup(), Phase::ProjH1Next);

    case Phase::ProjH1Next:
      if (obs.at(Direction::NW)) {
        return emit(Phase::ProjH1Next, Action::move(Direction::SW),
                    Phase::ProjH1Step2);
      }
      return emit(Phase::ProjH1Next, Action::move(Direction::DSW),
                  Phase::PostProject);

    case Phase::ProjH1Step2:
      return emit(Phase::ProjH1Step2, Action::move(Direction::DNW),
                  Phase::ProjH1Descend);

    case Phase::PostProject:
      if (term_) {
        return emit(Phase::PostProject, Action::terminate(), Phase::Terminated);
      }
      return epsilon(Phase::Search);

    case Phase::CaseCApproach:
      return emit(Phase::CaseCApproach, Action::move(Direction::SE),
                  Phase::CaseCAtSE);

    case Phase::CaseCAtSE:
      if (obs.at(Direction::DSW)) {
        // w = v+SE+DSW is tiled: back to v and into BuildPar.
        first_column_ = true;
        bp_anchor_ = neighbor(cfg_.agent, Direction::NW);
        return emit(Phase::CaseCAtSE, Action::move(Direction::NW),
                    Phase::BPScan);
      }
      in_shift_ = true;
      return emit(Phase::CaseCAtSE, Action::move(Direction::DSW),
                  Phase::CaseCAtTarget);

    case Phase::CaseCAtTarget:
      return emit(Phase::CaseCAtTarget, Action::place(), Phase::CaseCPlaced);
    case Phase::CaseCPlaced:
      return emit(Phase::CaseCPlaced, Action::move(Direction::UNE),
                  Phase::CaseCAtSE2);
    case Phase::CaseCAtSE2:
      return emit(Phase::CaseCAtSE2, Action::move(Direction::NW),
                  Phase::CaseCAtV);
    case Phase::CaseCAtV: {
      Emit e = emit(Phase::CaseCAtV, Action::pickup(), Phase::CaseCPicked);
      e.end_shift = true;
      return e;
    }
    case Phase::CaseCPicked:
      return emit(Phase::CaseCPicked, Action::move(Direction::SE),
                  Phase::Search);

    case Phase::CaseBApproach:
      in_shift_ = true;
      return emit(Phase::CaseBApproach, Action::move(Direction::DE),
                  Phase::CaseBAtBridge);
    case Phase::CaseBAtBridge:
      return emit(Phase::CaseBAtBridge, Action::place(), Phase::CaseBPlaced);
    case Phase::CaseBPlaced:
      return emit(Phase::CaseBPlaced, Action::move(Direction::UW),
                  Phase::CaseBAtV);
    case Phase::CaseBAtV: {
      Emit e = emit(Phase::CaseBAtV, Action::pickup(), Phase::CaseBPicked);
      e.end_shift = true;
      return e;
    }
    case Phase::CaseBPicked: {
      if (obs.at(Direction::SE) && obs.at(Direction::NE) &&
          !obs.at(Direction::S)) {
        return emit(Phase::CaseBPicked, Action::move(Direction::SE),
                    Phase::CaseBTraverse);
      }
      if (auto d = first_tiled({Direction::S, Direction::SE, Direction::NE})) {
        return emit(Phase::CaseBPicked, Action::move(*d), Phase::Search);
      }
      throw EngineLogicError("case 2: no tile at S, SE or NE after shift");
    }

    case Phase::CaseBTraverse:
      if (obs.at(Direction::UW) || obs.at(Direction::USE) ||
          obs.at(Direction::SW)) {
        return epsilon(Phase::Search);
      }
      if (obs.at(Direction::S)) {
        return emit(Phase::CaseBTraverse, Action::move(Direction::S),
                    Phase::CaseBTraverse);
      }
      return epsilon(Phase::Search);

    case Phase::CaseDMarch: {
      if (only_s_tiled({Direction::UW, Direction::USE, Direction::SW,
                        Direction::DSW, Direction::SE, Direction::DE,
                        Direction::S})) {
        return emit(Phase::CaseDMarch, Action::move(Direction::S),
                    Phase::CaseDMarch);
      }
      if (obs.at(Direction::UW) || obs.at(Direction::USE) ||
          obs.at(Direction::SW)) {
        return epsilon(Phase::Search);
      }
      in_shift_ = true;
      if (obs.at(Direction::DE)) {
        return emit(Phase::CaseDMarch, Action::move(Direction::N),
                    Phase::CaseDChainTop);
      }
      return epsilon(Phase::CaseDChainTop);
    }

    case Phase::CaseDChainTop:
      return emit(Phase::CaseDChainTop, Action::move(Direction::DE),
                  Phase::CaseDAtDE);
    case Phase::CaseDAtDE:
      return emit(Phase::CaseDAtDE, Action::place(), Phase::CaseDPlaced);
    case Phase::CaseDPlaced:
      return emit(Phase::CaseDPlaced, Action::move(Direction::UW),
                  Phase::CaseDBack);
    case Phase::CaseDBack:
      return emit(Phase::CaseDBack, Action::pickup(), Phase::CaseDChain);

    case Phase::CaseDChain:
      if (obs.at(Direction::N)) {
        return emit(Phase::CaseDChain, Action::move(Direction::NE),
                    Phase::CaseDRepos);
      }
      in_shift_ = false;
      if (case_e_) return epsilon(Phase::CaseEWalk);
      return emit(Phase::CaseDChain, Action::move(Direction::NE),
                  Phase::Search);

    case Phase::CaseDRepos:
      return emit(Phase::CaseDRepos, Action::move(Direction::DNW),
                  Phase::CaseDAtDE);

    case Phase::CaseEMarch: {
      if (only_s_tiled({Direction::UW, Direction::USE, Direction::SW,
                        Direction::SE, Direction::DE, Direction::S})) {
        return emit(Phase::CaseEMarch, Action::move(Direction::S),
                    Phase::CaseEMarch);
      }
      if (obs.at(Direction::UW) || obs.at(Direction::USE) ||
          obs.at(Direction::SW)) {
        return epsilon(Phase::Search);
      }
      if (!obs.at(Direction::SE) && !obs.at(Direction::DE)) {
        // Width-one parallelogram: project the whole column.
        return emit(Phase::CaseEMarch, Action::move(Direction::N),
                    Phase::ProjectEnter);
      }
      in_shift_ = true;
      if (obs.at(Direction::DE)) {
        return emit(Phase::CaseEMarch, Action::move(Direction::N),
                    Phase::CaseDChainTop);
      }
      return epsilon(Phase::CaseDChainTop);
    }

    case Phase::CaseEWalk:
      if (obs.at(Direction::S)) {
        return emit(Phase::CaseEWalk, Action::move(Direction::S),
                    Phase::Search);
      }
      if (obs.at(Direction::SE)) {
        return emit(Phase::CaseEWalk, Action::move(Direction::SE),
                    Phase::Search);
      }
      return emit(Phase::CaseEWalk, Action::move(Direction::S),
                  Phase::CaseEWalk);

    case Phase::Terminated:
      throw EngineLogicError("step after termination");
  }
  throw EngineLogicError("compute: unhandled phase");
}

void Engine::scan_for_icicle_violation() {
  // §5 check, evaluated on the pre-action observation: a tiled node outside
  // the projected fragment whose UNE neighbor is neither a fragment node nor
  // tiled clears the latch, even if that node is tiled later in the same
  // projection.
  auto check = [this](const Coord& v) {
    if (!cfg_.tiled(v)) return;
    if (proj_fragment_.count(v)) return;
    Coord above = neighbor(v, Direction::UNE);
    if (proj_fragment_.count(above)) return;
    if (cfg_.tiled(above)) return;
    term_ = false;
  };
  check(cfg_.agent);
  for (Direction d : all_directions()) check(neighbor(cfg_.agent, d));
}

StepRecord Engine::step() {
  if (phase_ == Phase::Terminated) {
    throw EngineLogicError("step after termination");
  }
  Observation obs;
  obs.self = cfg_.tiled(cfg_.agent);
  for (Direction d : all_directions()) {
    obs.dir[static_cast<std::size_t>(d)] = cfg_.tiled(neighbor(cfg_.agent, d));
  }

  bool exited_search = false;
  Emit e;
  int guard = 0;
  do {
    e = compute(obs, exited_search);
    if (++guard > 16) {
      throw EngineLogicError("compute: epsilon transition loop");
    }
  } while (e.is_epsilon);

  StepRecord rec;
  rec.index = steps_total_;
  rec.action = e.action;
  rec.computed_in = e.computed_in;
  rec.pos_before = cfg_.agent;
  rec.search_exit = exited_search;

  const bool proj_step = is_projection_phase(e.computed_in);
  rec.kind = proj_step ? StepKind::Proj
                       : (in_shift_ ? StepKind::Shift : StepKind::Other);
  if (proj_step) scan_for_icicle_violation();
  if (e.end_shift) in_shift_ = false;

  cfg_ = apply(cfg_, e.action);
  phase_ = e.next;
  rec.phase_after = phase_;
  rec.pos_after = cfg_.agent;
  rec.carrying_after = cfg_.carrying;

  if (cfg_.tiles.size() + (cfg_.carrying ? 1 : 0) != tile_budget_) {
    throw EngineLogicError("tile conservation violated");
  }

  ++steps_total_;
  switch (rec.kind) {
    case StepKind::Proj:
      ++steps_proj_;
      break;
    case StepKind::Shift:
      ++steps_shift_;
      break;
    case StepKind::Other:
      ++steps_other_;
      break;
  }
  return rec;
}

std::uint64_t default_step_budget(const Configuration& c) {
  const std::uint64_t n = c.tiles.size() + 1;
  return 10 * n * n * n;
}

namespace {

RunResult run_engine(Engine& engine, std::uint64_t max_steps,
                     const std::vector<Observer*>& observers,
                     bool record_trace) {
  RunResult result;
  while (!engine.terminated() && engine.steps() < max_steps) {
    StepRecord rec = engine.step();
    if (record_trace) result.trace.push_back(rec);
    for (Observer* o : observers) o->on_step(engine, rec);
  }
  result.terminated = engine.terminated();
  result.steps_total = engine.steps();
  result.steps_proj = engine.steps_proj();
  result.steps_shift = engine.steps_shift();
  result.steps_other = engine.steps_other();
  result.final_config = engine.config();
  return result;
}

}  // namespace

RunResult run_to_termination(const Configuration& c, std::uint64_t max_steps,
                             const std::vector<Observer*>& observers,
                             bool record_trace) {
  Engine engine(c, Engine::Mode::Icicle3D);
  if (max_steps == 0) max_steps = default_step_budget(c);
  return run_engine(engine, max_steps, observers, record_trace);
}

RunResult run_parallelogram_2d(const Configuration& c, std::uint64_t max_steps,
                               const std::vector<Observer*>& observers,
                               bool record_trace) {
  Engine engine(c, Engine::Mode::Parallelogram2D);
  if (max_steps == 0) max_steps = default_step_budget(c);
  return run_engine(engine, max_steps, observers, record_trace);
}

void write_trace(std::ostream& out, const std::vector<StepRecord>& trace) {
  for (const StepRecord& r : trace) {
    out << r.index << ' ' << phase_name(r.computed_in) << ' ';
    switch (r.action.kind) {
      case ActionKind::Move:
        out << "move " << direction_name(r.action.dir);
        break;
      case ActionKind::Place:
        out << "place -";
        break;
      case ActionKind::Pickup:
        out << "pickup -";
        break;
      case ActionKind::Terminate:
        out << "terminate -";
        break;
    }
    out << ' ' << r.pos_after.x << ' ' << r.pos_after.y << ' ' << r.pos_after.z
        << ' ' << (r.carrying_after ? 1 : 0) << ' '
        << step_kind_name(r.kind) << '\n';
  }
}

}  // namespace icicle
