#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdfa/ast.hpp"
#include "pdfa/cfg.hpp"

namespace pdfa {

using VarSet = std::set<std::string>;

VarSet gen_lv(const BlockInfo& block);
VarSet kill_lv(const BlockInfo& block);

enum class FlowDirection { Forward, Backward };
enum class Combine { Union, Intersection };

/// One instance of the classical equation framework over a finite
/// powerset lattice. At extreme labels the circle-side value is the
/// extreme value iota; everywhere else it is the combine over the
/// bullet-side values of flow predecessors.
struct MonotoneInstance {
  VarSet universe;  // top of the lattice
  FlowDirection direction = FlowDirection::Backward;
  Combine combine = Combine::Union;
  std::set<Label> extreme_labels;
  VarSet extreme_value;
  std::function<VarSet(Label, const VarSet&)> transfer;
};

/// Per-label pair of lattice values. For a forward analysis circle=entry
/// and bullet=exit; backward reverses the reading.
struct MonotoneSolution {
  std::map<Label, VarSet> circle;
  std::map<Label, VarSet> bullet;
};

struct WorklistOptions {
  /// Initial worklist order; labels absent here are appended in label
  /// order. Used to exercise order independence.
  std::vector<Label> seed_order;
  /// Detect transfer functions that move against the combine direction.
  bool check_monotone = true;
};

/// Samples nested pairs X within Y from the universe and verifies
/// f(X) within f(Y) for every label. Throws SolverError naming the
/// first offending label.
void check_transfer_monotonicity(const MonotoneInstance& inst,
                                 const FlowGraph& g, int samples = 32,
                                 unsigned seed = 1);

/// FIFO worklist solve to the least (union) or greatest (intersection)
/// fixpoint. Throws SolverError when a non-monotone transfer is caught.
MonotoneSolution solve_monotone(const MonotoneInstance& inst,
                                const FlowGraph& g,
                                const WorklistOptions& opts = {});

/// Round-robin chaotic iteration; agrees with the worklist solve and
/// exists to assert exactly that.
MonotoneSolution solve_round_robin(const MonotoneInstance& inst,
                                   const FlowGraph& g);

MonotoneInstance make_lv_instance(const Program& p, const FlowGraph& g);

struct LvSolution {
  std::map<Label, VarSet> entry;
  std::map<Label, VarSet> exit;
};

/// Classical live-variable analysis: backward may analysis with
/// exit(final) = {} as the extreme value.
LvSolution solve_lv(const Program& p);

}  // namespace pdfa
