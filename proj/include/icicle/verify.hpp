#pragma once

// Independent oracles and per-step monitors: the P1-P3 fragment predicates,
// two icicle checkers that must agree, the progress potentials Phi and Psi,
// the 64-neighborhood census, and the trace monitors derived from the
// structural lemmas. Everything here is side-effect-free and engine-agnostic;
// check_trace replays a recorded action list from the initial configuration
// rather than trusting engine state.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "icicle/engine.hpp"
#include "icicle/world.hpp"

namespace icicle {

// P1: F is a platform (no tile at UW/USE/UNE of any node of F).
// P2: F covers the xy-coordinate of every tiled node.
// P3: F's xy-coordinates form the contiguous range down to 0.
// xy is taken against the bounding cylinder of T. Throws unless F is a
// fragment of T (maximal in-layer component of tiled nodes).
std::array<bool, 3> p1_p2_p3(const Fragment& f, const CoordSet& tiles);

// Checker A: some fragment satisfies P1-P3 and every other tiled node has a
// tiled UNE neighbor (Definition-3 form).
bool icicle_by_fragment(const CoordSet& tiles);

// Checker B: every maximal DSW-tower's top tile lies in one common
// (partially filled) parallelogram (direct §1.4 form).
bool icicle_by_towers(const CoordSet& tiles);

// Both checkers; throws std::invalid_argument on a disconnected input and
// std::logic_error if the checkers disagree.
bool is_icicle(const CoordSet& tiles);

// The §1.4 shape predicate on a single-layer tile set: equal-length columns
// sharing a southern row, consecutive west to east, with the westernmost
// column allowed to be shorter. Used by checker B and the 2D acceptance.
bool is_partially_filled_parallelogram(const CoordSet& tiles);

struct PhiBreakdown {
  std::int64_t sum_xy = 0;
  std::int64_t platform_count = 0;
  std::int64_t phi = 0;  // sum_xy + platform_count
};

// Phi = sum of xy over tiles (cylinder of the current T) plus the number of
// fragments satisfying P1.
PhiBreakdown phi(const CoordSet& tiles);

// Psi = number of empty nodes inside the bounding box with a tile somewhere
// below in the DSW direction.
std::int64_t psi(const CoordSet& tiles);

// 64-neighborhood census over the tiled subsets of {DSW, DNW, DE, S, SE, NE}
// (the directions that may hold tiles at a search exit).
struct CensusEntry {
  std::uint8_t mask = 0;  // bit i set = kExitCandidates[i] tiled
  std::vector<Direction> tiled;
  NodeClass::Kind kind = NodeClass::Kind::Removable;
  DispatchCase dispatch = DispatchCase::BuildPar;
};

struct CensusTable {
  int removable = 0;
  int shiftable = 0;
  int unmovable = 0;
  std::vector<CensusEntry> entries;  // all 64 in mask order
};

CensusTable census();

// One monitor finding; every violation is replayable from the trace.
struct Violation {
  std::string monitor;
  std::uint64_t step = 0;
  std::string detail;
  std::vector<Coord> nodes;
};

// Phi/Psi samples taken when the agent leaves the search phase (the paper's
// C^i subsequence); step is the index of the exiting step.
struct PotentialSample {
  std::uint64_t step = 0;
  std::int64_t sum_xy = 0;
  std::int64_t platform_count = 0;
  std::int64_t phi = 0;
  std::int64_t psi = 0;
};

// Observer that records everything check_trace needs: the initial
// configuration, the per-step records and the search-exit potential samples.
class RunRecorder : public Observer {
 public:
  explicit RunRecorder(const Configuration& initial) : initial_(initial) {}

  void on_step(const Engine& engine, const StepRecord& record) override;

  const Configuration& initial() const { return initial_; }
  const std::vector<StepRecord>& trace() const { return trace_; }
  const std::vector<PotentialSample>& samples() const { return samples_; }

 private:
  Configuration initial_;
  std::vector<StepRecord> trace_;
  std::vector<PotentialSample> samples_;
};

// Replays the trace from the initial configuration and checks: action
// legality, tile conservation, the 4-step connectivity window (with the
// carried-tile rule inside the window), initial-cylinder containment,
// western anchor, Phi monotone at search exits (strict unless nothing was
// shifted or a projection intervened), Psi strict decrease after the first
// search exit whose fragment satisfies P1-P3, persistence of P1-P3 from that
// point on, sum-xy conservation across every projection, agreement with the
// recorded samples, and the dual icicle check when Terminate is reached.
// Returns the empty list iff every monitor passes.
std::vector<Violation> check_trace(const Configuration& initial,
                                   const std::vector<StepRecord>& trace,
                                   const std::vector<PotentialSample>& samples);

std::vector<Violation> check_recorded_run(const RunRecorder& recorder);

}  // namespace icicle
