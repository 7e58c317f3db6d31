#include "pdfa/monotone.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace pdfa {

VarSet gen_lv(const BlockInfo& block) {
  switch (block.kind) {
    case BlockKind::Assign:
      return free_vars(*block.expr);
    case BlockKind::Test:
      return free_vars(*block.test);
    default:
      return {};
  }
}

VarSet kill_lv(const BlockInfo& block) {
  switch (block.kind) {
    case BlockKind::Assign:
    case BlockKind::Random:
      return {block.var};
    default:
      return {};
  }
}

namespace {

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.begin()));
  return out;
}

bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

struct Solver {
  const MonotoneInstance& inst;
  const FlowGraph& g;
  // analysis_flow holds the edges in the direction information travels:
  // (pred, label) pairs such that circle(label) collects bullet(pred).
  std::vector<std::pair<Label, Label>> analysis_flow;

  explicit Solver(const MonotoneInstance& i, const FlowGraph& graph)
      : inst(i), g(graph) {
    for (const Edge& e : g.edges) {
      if (inst.direction == FlowDirection::Forward)
        analysis_flow.emplace_back(e.from, e.to);
      else
        analysis_flow.emplace_back(e.to, e.from);
    }
  }

  VarSet bottom() const {
    return inst.combine == Combine::Union ? VarSet{} : inst.universe;
  }

  VarSet combine(const VarSet& a, const VarSet& b) const {
    return inst.combine == Combine::Union ? set_union(a, b)
                                          : set_intersection(a, b);
  }

  VarSet circle_value(Label l, const std::map<Label, VarSet>& bullet) const {
    if (inst.extreme_labels.count(l)) return inst.extreme_value;
    VarSet acc = bottom();
    for (auto& [pred, to] : analysis_flow)
      if (to == l) acc = combine(acc, bullet.at(pred));
    return acc;
  }

  void check_direction(Label l, const VarSet& before,
                       const VarSet& after) const {
    // Values only travel toward the fixpoint: upward under union,
    // downward under intersection. A move the other way means the
    // transfer function is not monotone.
    bool ok = inst.combine == Combine::Union ? subset(before, after)
                                             : subset(after, before);
    if (!ok)
      throw SolverError("non-monotone transfer detected at label " +
                        std::to_string(l));
  }
};

}  // namespace

void check_transfer_monotonicity(const MonotoneInstance& inst,
                                 const FlowGraph& g, int samples,
                                 unsigned seed) {
  std::vector<std::string> universe(inst.universe.begin(),
                                    inst.universe.end());
  std::mt19937 rng(seed);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < samples; ++trial) {
    VarSet smaller, larger;
    for (const auto& v : universe) {
      if (coin(rng)) larger.insert(v);
      if (larger.count(v) && coin(rng)) smaller.insert(v);
    }
    for (auto& [l, b] : g.blocks) {
      VarSet fs = inst.transfer(l, smaller);
      VarSet fl = inst.transfer(l, larger);
      if (!subset(fs, fl))
        throw SolverError("transfer at label " + std::to_string(l) +
                          " is not monotone on sampled sets");
    }
  }
}

MonotoneSolution solve_monotone(const MonotoneInstance& inst,
                                const FlowGraph& g,
                                const WorklistOptions& opts) {
  if (opts.check_monotone) check_transfer_monotonicity(inst, g, 8);
  Solver s(inst, g);
  MonotoneSolution sol;
  for (auto& [l, b] : g.blocks) {
    sol.circle[l] = s.bottom();
    sol.bullet[l] = s.bottom();
  }

  std::deque<Label> worklist;
  std::set<Label> queued;
  auto push = [&](Label l) {
    if (queued.insert(l).second) worklist.push_back(l);
  };
  for (Label l : opts.seed_order)
    if (g.blocks.count(l)) push(l);
  for (auto& [l, b] : g.blocks) push(l);

  while (!worklist.empty()) {
    Label l = worklist.front();
    worklist.pop_front();
    queued.erase(l);

    VarSet circle = s.circle_value(l, sol.bullet);
    VarSet bullet = inst.transfer(l, circle);
    if (opts.check_monotone) s.check_direction(l, sol.bullet[l], bullet);
    sol.circle[l] = circle;
    if (bullet != sol.bullet[l]) {
      sol.bullet[l] = std::move(bullet);
      for (auto& [pred, to] : s.analysis_flow)
        if (pred == l) push(to);
    }
  }

  // One final circle refresh so labels whose inputs settled last are
  // consistent too.
  for (auto& [l, b] : g.blocks) sol.circle[l] = s.circle_value(l, sol.bullet);
  return sol;
}

MonotoneSolution solve_round_robin(const MonotoneInstance& inst,
                                   const FlowGraph& g) {
  Solver s(inst, g);
  MonotoneSolution sol;
  for (auto& [l, b] : g.blocks) {
    sol.circle[l] = s.bottom();
    sol.bullet[l] = s.bottom();
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [l, b] : g.blocks) {
      VarSet circle = s.circle_value(l, sol.bullet);
      VarSet bullet = inst.transfer(l, circle);
      if (circle != sol.circle[l] || bullet != sol.bullet[l]) changed = true;
      sol.circle[l] = std::move(circle);
      sol.bullet[l] = std::move(bullet);
    }
  }
  return sol;
}

MonotoneInstance make_lv_instance(const Program& p, const FlowGraph& g) {
  MonotoneInstance inst;
  for (const VarDecl& d : p.decls.all()) inst.universe.insert(d.name);
  inst.direction = FlowDirection::Backward;
  inst.combine = Combine::Union;
  inst.extreme_labels = g.finals;
  inst.extreme_value = {};
  inst.transfer = [&g](Label l, const VarSet& x) {
    const BlockInfo& b = g.block(l);
    VarSet out = x;
    for (const auto& k : kill_lv(b)) out.erase(k);
    for (const auto& v : gen_lv(b)) out.insert(v);
    return out;
  };
  return inst;
}

LvSolution solve_lv(const Program& p) {
  FlowGraph g = flow(p);
  MonotoneInstance inst = make_lv_instance(p, g);
  MonotoneSolution sol = solve_monotone(inst, g);
  // Backward analysis: circle is the exit side, bullet the entry side.
  LvSolution lv;
  lv.entry = std::move(sol.bullet);
  lv.exit = std::move(sol.circle);
  return lv;
}

}  // namespace pdfa
