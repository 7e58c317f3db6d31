#include "pdfa/prob_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace pdfa {

namespace {

std::vector<Label> sorted_labels(const FlowGraph& g) {
  std::vector<Label> out;
  out.reserve(g.blocks.size());
  for (auto& [l, b] : g.blocks) out.push_back(l);
  return out;  // std::map keys are already sorted
}

std::size_t entry_index(const std::vector<Label>& order, Label l) {
  auto it = std::lower_bound(order.begin(), order.end(), l);
  return 2 * static_cast<std::size_t>(it - order.begin());
}

std::size_t exit_index(const std::vector<Label>& order, Label l) {
  return entry_index(order, l) + 1;
}

}  // namespace

VectorEquationSystem forward_equation_system(const Program& p,
                                             const ProbVector& rho0,
                                             const Abstraction& abs,
                                             std::vector<Label>* order_out) {
  StateSpace ss(p.decls);
  if (rho0.dim() != ss.size())
    throw InputError("initial distribution has wrong dimension");
  if (!rho0.is_distribution(1e-6))
    throw InputError("initial vector is not a distribution");
  FlowGraph g = flow(p);
  std::vector<Label> order = sorted_labels(g);

  // Per-label abstract operator and per-test abstract projection.
  std::map<Label, DenseMatrix> transfer;
  std::map<Label, DenseMatrix> proj;
  for (auto& [l, b] : g.blocks) {
    if (b.kind == BlockKind::Test)
      proj.emplace(l, abstract_test(*b.test, abs, ss));
    else
      transfer.emplace(l, lifted_block_matrix(b, ss, abs));
  }

  VectorEquationSystem sys;
  sys.dim = abs.classes();
  sys.equations.assign(2 * order.size(), VecEquation{});
  DenseMatrix id = DenseMatrix::identity(sys.dim);

  for (Label l : order) {
    VecEquation& entry_eq = sys.equations[entry_index(order, l)];
    // Expected-visit measure: the initial mass lands on init, and every
    // label additionally collects what flows in. For init labels without
    // incoming edges (every acyclic program) this is just rho0 lifted.
    if (l == g.init) entry_eq.constant = lift_distribution(rho0, abs);
    for (const Edge& e : g.in_edges(l)) {
      VecTerm t;
      t.unknown = exit_index(order, e.from);
      if (g.block(e.from).kind == BlockKind::Test) {
        const DenseMatrix& ps = proj.at(e.from);
        t.coeff = e.branch == BranchKind::True ? ps : id - ps;
      }
      entry_eq.terms.push_back(std::move(t));
    }

    VecEquation& exit_eq = sys.equations[exit_index(order, l)];
    VecTerm t;
    t.unknown = entry_index(order, l);
    if (g.block(l).kind != BlockKind::Test) t.coeff = transfer.at(l);
    exit_eq.terms.push_back(std::move(t));
  }

  if (order_out) *order_out = order;
  return sys;
}

ProbSolution solve_prob_forward(const Program& p, const ProbVector& rho0,
                                const Abstraction& abs,
                                const SolveOptions& opts) {
  StateSpace ss(p.decls);
  FlowGraph g = flow(p);
  std::vector<Label> order;
  VectorEquationSystem sys = forward_equation_system(p, rho0, abs, &order);
  SolveResult res = solve_linear_system(sys, opts);

  ProbSolution sol;
  sol.method = res.method;
  sol.residual = res.residual;
  for (Label l : order) {
    sol.entry.emplace(l, res.values[entry_index(order, l)]);
    sol.exit.emplace(l, res.values[exit_index(order, l)]);
    const BlockInfo& b = g.block(l);
    if (b.kind == BlockKind::Test)
      sol.test_operator.emplace(l, abstract_test(*b.test, abs, ss));
  }
  return sol;
}

BranchInfo extract_branch_probs(const ProbSolution& sol, const FlowGraph& g) {
  BranchInfo info;
  for (auto& [l, b] : g.blocks) {
    if (b.kind != BlockKind::Test) continue;
    BranchOutcome out;
    auto t = g.true_successor(l);
    if (!t) throw InputError("test label " + std::to_string(l) +
                             " has no true branch");
    out.true_to = *t;
    auto falses = g.false_successors(l);
    if (falses.size() > 1)
      throw InputError("test label " + std::to_string(l) +
                       " has several false successors");
    if (!falses.empty()) out.false_to = falses.front();

    const ProbVector& sigma = sol.exit.at(l);
    double mass = one_norm(sigma);
    if (mass <= 1e-12) {
      out.reachable = false;
      out.p_true = 0.5;
      out.p_false = 0.5;
      info.warnings.push_back(
          "test at label " + std::to_string(l) +
          " is unreachable under the given input distribution; branch "
          "probability defaulted to 1/2");
    } else {
      out.p_true = branch_probability(sigma, sol.test_operator.at(l)) / mass;
      out.p_false = 1.0 - out.p_true;
    }
    info.tests.emplace(l, std::move(out));
  }
  return info;
}

BranchInfo static_branch_info(const FlowGraph& g,
                              const std::map<Label, double>& p_true) {
  BranchInfo info;
  for (auto& [l, b] : g.blocks) {
    if (b.kind != BlockKind::Test) continue;
    auto it = p_true.find(l);
    if (it == p_true.end())
      throw InputError("no static probability given for test label " +
                       std::to_string(l));
    if (it->second < 0.0 || it->second > 1.0)
      throw InputError("static probability for label " + std::to_string(l) +
                       " outside [0,1]");
    BranchOutcome out;
    auto t = g.true_successor(l);
    if (!t) throw InputError("test label " + std::to_string(l) +
                             " has no true branch");
    out.true_to = *t;
    auto falses = g.false_successors(l);
    if (!falses.empty()) out.false_to = falses.front();
    out.p_true = it->second;
    out.p_false = 1.0 - it->second;
    info.tests.emplace(l, std::move(out));
  }
  for (auto& [l, pt] : p_true)
    if (!info.tests.count(l))
      throw InputError("label " + std::to_string(l) + " is not a test");
  return info;
}

namespace {

DenseMatrix live_factor() {
  DenseMatrix l(2, 2);
  l.at(0, 1) = 1.0;
  l.at(1, 1) = 1.0;
  return l;
}

DenseMatrix kill_factor() {
  DenseMatrix k(2, 2);
  k.at(0, 0) = 1.0;
  k.at(1, 0) = 1.0;
  return k;
}

}  // namespace

DenseMatrix lv_operator(const BlockInfo& block, const VarDecls& vars) {
  const DenseMatrix live = live_factor();
  const DenseMatrix kill = kill_factor();
  const DenseMatrix id = DenseMatrix::identity(2);

  VarSet reads;
  std::string written;
  switch (block.kind) {
    case BlockKind::Assign:
      reads = free_vars(*block.expr);
      written = block.var;
      break;
    case BlockKind::Random:
      // The worked probabilistic LV equations treat a random assignment
      // like an assignment reading nothing: the target dies.
      written = block.var;
      break;
    case BlockKind::Test:
      reads = free_vars(*block.test);
      break;
    case BlockKind::Skip:
      break;
  }

  DenseMatrix op = DenseMatrix::identity(1);
  for (const VarDecl& d : vars.all()) {
    const DenseMatrix* factor = &id;
    if (reads.count(d.name))
      factor = &live;
    else if (d.name == written)
      factor = &kill;
    op = kron(op, *factor);
  }
  return op;
}

VectorEquationSystem plv_equation_system(const Program& p,
                                         const BranchInfo& branches,
                                         std::vector<Label>* order_out) {
  FlowGraph g = flow(p);
  std::vector<Label> order = sorted_labels(g);
  std::size_t v = p.decls.count();
  std::size_t dim = std::size_t{1} << v;

  // All-dead extreme value (1,0) tensored v times: basis index 0.
  ProbVector all_dead(dim);
  all_dead[0] = 1.0;

  VectorEquationSystem sys;
  sys.dim = dim;
  sys.equations.assign(2 * order.size(), VecEquation{});

  for (Label l : order) {
    VecEquation& entry_eq = sys.equations[entry_index(order, l)];
    VecTerm t;
    t.unknown = exit_index(order, l);
    t.coeff = lv_operator(g.block(l), p.decls);
    entry_eq.terms.push_back(std::move(t));

    VecEquation& exit_eq = sys.equations[exit_index(order, l)];
    if (g.finals.count(l)) {
      exit_eq.constant = all_dead;
      continue;
    }
    const bool is_test = g.block(l).kind == BlockKind::Test;
    const BranchOutcome* outcome = nullptr;
    if (is_test) {
      auto it = branches.tests.find(l);
      if (it == branches.tests.end())
        throw InputError("no branch probability for test label " +
                         std::to_string(l));
      outcome = &it->second;
    }
    for (const Edge& e : g.out_edges(l)) {
      VecTerm term;
      term.unknown = entry_index(order, e.to);
      if (is_test)
        term.scalar = e.branch == BranchKind::True ? outcome->p_true
                                                   : outcome->p_false;
      exit_eq.terms.push_back(std::move(term));
    }
  }

  if (order_out) *order_out = order;
  return sys;
}

PlvSolution solve_plv(const Program& p, const BranchInfo& branches,
                      const SolveOptions& opts) {
  std::vector<Label> order;
  VectorEquationSystem sys = plv_equation_system(p, branches, &order);
  SolveResult res = solve_linear_system(sys, opts);

  PlvSolution sol;
  sol.method = res.method;
  sol.residual = res.residual;
  for (const VarDecl& d : p.decls.all()) sol.vars.push_back(d.name);
  for (Label l : order) {
    sol.entry.emplace(l, res.values[entry_index(order, l)]);
    sol.exit.emplace(l, res.values[exit_index(order, l)]);
  }
  return sol;
}

double marginal_liveness(const PlvSolution& sol, Label l,
                         const std::string& var, At where) {
  auto vi = std::find(sol.vars.begin(), sol.vars.end(), var);
  if (vi == sol.vars.end())
    throw InputError("unknown variable '" + var + "'");
  std::size_t pos = static_cast<std::size_t>(vi - sol.vars.begin());
  const auto& side = where == At::Entry ? sol.entry : sol.exit;
  auto it = side.find(l);
  if (it == side.end())
    throw InputError("unknown label " + std::to_string(l));
  const ProbVector& vec = it->second;
  // First declared variable is the most significant bit; a set bit
  // means live.
  std::size_t bit = sol.vars.size() - 1 - pos;
  double mass = 0.0;
  for (std::size_t i = 0; i < vec.dim(); ++i)
    if ((i >> bit) & 1u) mass += vec[i];
  return mass;
}

}  // namespace pdfa
