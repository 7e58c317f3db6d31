#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdfa/abstraction.hpp"
#include "pdfa/cfg.hpp"
#include "pdfa/equations.hpp"
#include "pdfa/linalg.hpp"
#include "pdfa/monotone.hpp"

namespace pdfa {

/// Forward occupancy solution over the abstracted state space. Inside
/// loops the vectors are expected-visit measures and may exceed 1-norm 1.
struct ProbSolution {
  std::map<Label, ProbVector> entry;
  std::map<Label, ProbVector> exit;
  /// Abstract test matrix per test label (for the true branch).
  std::map<Label, DenseMatrix> test_operator;
  SolveMethod method = SolveMethod::Topological;
  double residual = 0.0;
};

/// Solves the forward linear equations: entry(init) = rho0 * a, block
/// exits are entry * lifted block operator, and test successors weigh
/// the incoming measure by the abstract test and its complement.
ProbSolution solve_prob_forward(const Program& p, const ProbVector& rho0,
                                const Abstraction& abs,
                                const SolveOptions& opts = {});

struct BranchOutcome {
  Label true_to = kNoLabel;
  std::optional<Label> false_to;
  double p_true = 0.0;
  double p_false = 0.0;
  /// False when no measure reaches the test under rho0; the probability
  /// then defaults to 1/2 and a warning is recorded.
  bool reachable = true;
};

struct BranchInfo {
  std::map<Label, BranchOutcome> tests;
  std::vector<std::string> warnings;
};

/// Static branch probabilities from the forward solution:
/// p = |sigma P|_1 / |sigma|_1 with sigma the exit measure at the test.
BranchInfo extract_branch_probs(const ProbSolution& sol, const FlowGraph& g);

/// Branch info taken from user-provided true-branch probabilities
/// instead of a forward phase.
BranchInfo static_branch_info(const FlowGraph& g,
                              const std::map<Label, double>& p_true);

/// Tensor transfer operator of one block on the dead/live property
/// space: live-making factors for read variables, kill factors for
/// written ones, identity elsewhere.
DenseMatrix lv_operator(const BlockInfo& block, const VarDecls& vars);

/// Joint dead/live distribution per label; dimension 2^|Var| with the
/// per-variable order (dead, live) and the first declared variable as
/// the most significant factor.
struct PlvSolution {
  std::vector<std::string> vars;
  std::map<Label, ProbVector> entry;
  std::map<Label, ProbVector> exit;
  SolveMethod method = SolveMethod::Topological;
  double residual = 0.0;
};

/// Backward probabilistic live-variable analysis with static branch
/// probabilities; exits of final labels are the all-dead tensor.
PlvSolution solve_plv(const Program& p, const BranchInfo& branches,
                      const SolveOptions& opts = {});

enum class At { Entry, Exit };

/// Probability that `var` is live at the given label position.
double marginal_liveness(const PlvSolution& sol, Label l,
                         const std::string& var, At where = At::Entry);

/// The underlying equation systems, exposed so they can be cross-checked
/// against an independent dense solve.
VectorEquationSystem forward_equation_system(const Program& p,
                                             const ProbVector& rho0,
                                             const Abstraction& abs,
                                             std::vector<Label>* order);
VectorEquationSystem plv_equation_system(const Program& p,
                                         const BranchInfo& branches,
                                         std::vector<Label>* order);

}  // namespace pdfa
