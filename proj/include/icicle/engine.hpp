#pragma once

// The icicle-formation algorithm and the 2D parallelogram algorithm as an
// explicit stepping automaton. Every call to Engine::step() performs one
// Look-Compute-Move cycle and emits exactly one action; the agent's choices
// are a pure function of its phase, a constant-size register set and the
// 13-bit observation (its node plus twelve neighbors).

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "icicle/world.hpp"

namespace icicle {

enum class Phase : std::uint8_t {
  Search,
  BPScan,
  BPPlaceEast,
  BPRetNW,
  BPPlaceAbove,
  BPRetSW,
  BPPlacedBelow,
  BPEnterNext,
  BPClimbNext,
  BPFullClimbN,
  BPDescendNW,
  RFPClimbN,
  RFPPath,
  PostPickup,
  ProjectEnter,
  ProjClimbN,
  ProjDescend,
  ProjAscend,
  ProjNext,
  ProjH1Descend,
  ProjH1Ascend,
  ProjH1Next,
  ProjH1Step2,
  PostProject,
  CaseCApproach,
  CaseCAtSE,
  CaseCAtTarget,
  CaseCPlaced,
  CaseCAtSE2,
  CaseCAtV,
  CaseCPicked,
  CaseBApproach,
  CaseBAtBridge,
  CaseBPlaced,
  CaseBAtV,
  CaseBPicked,
  CaseBTraverse,
  CaseDMarch,
  CaseDChainTop,
  CaseDAtDE,
  CaseDPlaced,
  CaseDBack,
  CaseDChain,
  CaseDRepos,
  CaseEMarch,
  CaseEWalk,
  Terminated,
};

std::string_view phase_name(Phase p);

enum class StepKind : std::uint8_t { Proj, Shift, Other };

std::string_view step_kind_name(StepKind k);

struct StepRecord {
  std::uint64_t index = 0;
  Action action;
  Phase computed_in = Phase::Search;  // micro state that chose the action
  Phase phase_after = Phase::Search;
  StepKind kind = StepKind::Other;
  Coord pos_before{};
  Coord pos_after{};
  bool carrying_after = true;
  bool search_exit = false;  // this step left the search phase
};

// Raised when the automaton reaches a (state, observation) pair its case
// analysis deems impossible; indicates an implementation bug, not bad input.
struct EngineLogicError : std::logic_error {
  using std::logic_error::logic_error;
};

// Where the automaton dispatches after leaving the search phase, as a
// function of the tiled subset of {DSW, DNW, DE, S, SE, NE}.
enum class DispatchCase : std::uint8_t {
  BuildPar,    // removable, or v+SE bridges (case 1 handled inside BuildPar)
  Case2Shift,  // v+DE bridges; shift to v+DE
  Case3Probe,  // only DSW and SE tiled; probe v+SE+DSW
  Case4Chain,  // exactly {DNW, S, NE}; unmovable, southward march + DE chain
  Case5Chain,  // exactly {DNW, S}; march + DE chain or whole-column project
};

std::string_view dispatch_case_name(DispatchCase c);

// The dispatch decision at node v (which must look like a search exit: no
// tiles at UW, USE, UNE, NW, SW, N). Exposed for the neighborhood census.
DispatchCase dispatch_case(const Configuration& c, const Coord& v);

class Engine {
 public:
  enum class Mode : std::uint8_t { Icicle3D, Parallelogram2D };

  // Validates the §1.4 preconditions (agent on a tiled node, carrying,
  // tiles connected; one layer only for the 2D mode) and reports every
  // failed one in the exception message.
  Engine(Configuration c, Mode mode = Mode::Icicle3D);

  bool terminated() const { return phase_ == Phase::Terminated; }
  const Configuration& config() const { return cfg_; }
  Phase phase() const { return phase_; }
  bool term_flag() const { return term_; }
  std::uint64_t steps() const { return steps_total_; }
  std::uint64_t steps_proj() const { return steps_proj_; }
  std::uint64_t steps_shift() const { return steps_shift_; }
  std::uint64_t steps_other() const { return steps_other_; }

  // One Look-Compute-Move cycle. Throws EngineLogicError after termination
  // or on an internally inconsistent state.
  StepRecord step();

 private:
  struct Observation;
  struct Emit;

  Emit compute(const Observation& obs, bool& exited_search);
  void scan_for_icicle_violation();

  Configuration cfg_;
  Mode mode_;
  Phase phase_ = Phase::Search;
  bool first_column_ = true;
  bool term_ = false;
  bool case_e_ = false;    // the running DE chain belongs to case 5
  bool in_shift_ = false;  // a non-projection tile shift is in progress
  CoordSet proj_fragment_;  // node set of the fragment being projected
  Coord bp_anchor_{};       // node whose tile the current BuildPar pass owes
  std::vector<Direction> rfp_path_;  // walk back to the anchor
  std::size_t rfp_cursor_ = 0;
  bool rfp_path_ready_ = false;
  std::uint64_t steps_total_ = 0;
  std::uint64_t steps_proj_ = 0;
  std::uint64_t steps_shift_ = 0;
  std::uint64_t steps_other_ = 0;
  std::size_t tile_budget_ = 0;  // |tiles| + carried, constant over a run
};

class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_step(const Engine& engine, const StepRecord& record) = 0;
};

struct RunResult {
  bool terminated = false;
  std::uint64_t steps_total = 0;
  std::uint64_t steps_proj = 0;
  std::uint64_t steps_shift = 0;
  std::uint64_t steps_other = 0;
  Configuration final_config;
  std::vector<StepRecord> trace;  // filled only when requested
};

// Safety net one order of magnitude above the O(n^3) bound.
std::uint64_t default_step_budget(const Configuration& c);

// Runs the 3D icicle algorithm until Terminate or max_steps; observers are
// invoked after every applied action. A max_steps exit leaves
// result.terminated false; it is a distinct outcome, not an error.
RunResult run_to_termination(const Configuration& c, std::uint64_t max_steps,
                             const std::vector<Observer*>& observers = {},
                             bool record_trace = false);

// Runs the 2D parallelogram algorithm; rejects non-planar input.
RunResult run_parallelogram_2d(const Configuration& c,
                               std::uint64_t max_steps = 0,
                               const std::vector<Observer*>& observers = {},
                               bool record_trace = false);

// One line per step: index phase action dir x y z carrying kind.
// Position is the agent's node after the action; dir is '-' for actions
// without one. Byte-stable for golden tests.
void write_trace(std::ostream& out, const std::vector<StepRecord>& trace);

}  // namespace icicle
