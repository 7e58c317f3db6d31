#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pdfa/ast.hpp"
#include "pdfa/cfg.hpp"
#include "pdfa/linalg.hpp"

namespace pdfa {

using StateTuple = std::vector<long long>;

/// Enumerated space of classical states. The first declared variable is
/// the most significant tensor factor:
///   index(s) = sum_i s_i * prod_{j>i} size_j.
class StateSpace {
public:
  explicit StateSpace(VarDecls decls);

  const VarDecls& decls() const { return decls_; }
  std::size_t size() const { return size_; }
  std::size_t var_count() const { return decls_.count(); }

  std::size_t index(const StateTuple& s) const;
  StateTuple state(std::size_t index) const;
  Enumeration<StateTuple> enumeration() const;

private:
  VarDecls decls_;
  std::vector<std::size_t> stride_;
  std::size_t size_;
};

bool is_prime(long long n);

/// Evaluates an expression in a classical state. Unreduced integer
/// result; modulo by zero throws InputError (an execution fault).
long long eval_expr(const Expr& e, const StateTuple& s, const StateSpace& ss);
bool eval_bexpr(const BExpr& b, const StateTuple& s, const StateSpace& ss);

/// Reduction applied on assignment: results wrap into 0..size-1
/// (mathematical modulo, so negatives wrap upward).
long long reduce_to_range(long long value, long long size);

/// Row-stochastic linear operator of an elementary block over the full
/// state space: identity for skip, the state-update representation for
/// assignments, the probability mix of updates for random assignments.
/// Tests are represented by projections, not by transfer matrices.
DenseMatrix block_matrix(const BlockInfo& block, const StateSpace& ss,
                         std::size_t entry_cap = kDefaultEntryCap);

/// Diagonal of the projection matrix of a test over the state space.
std::vector<double> test_diagonal(const BExpr& b, const StateSpace& ss);

/// Dense projection (pred_rep of the test over states).
DenseMatrix test_matrix(const BExpr& b, const StateSpace& ss,
                        std::size_t entry_cap = kDefaultEntryCap);

/// p = |rho * P|_1 : probability mass selected by a projection.
double branch_probability(const ProbVector& rho, const DenseMatrix& proj);

/// One configuration of the small-step semantics: the remaining program
/// (nullptr once stopped) and the classical state.
struct Config {
  StmtPtr rest;
  StateTuple state;

  bool stopped() const { return rest == nullptr; }
};

/// Deterministic RNG used by the interpreter; a thin counter-based
/// generator so reports do not depend on the platform's distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  /// Uniform in [0,1).
  double uniform();

private:
  std::uint64_t state_;
};

/// Seed for one trial, split off the master seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

/// One transition of the small-step semantics. Deterministic rules fire
/// with probability one; random assignments sample their distribution.
Config sos_step(const Config& c, const StateSpace& ss, Rng& rng);

struct EdgeCount {
  Label from;
  Label to;
  std::uint64_t count = 0;
  /// count / visits(from).
  double frequency = 0.0;
};

struct MonteCarloReport {
  std::vector<EdgeCount> edges;  // sorted by (from, to)
  std::map<Label, std::uint64_t> visits;
  std::uint64_t trials = 0;
  std::uint64_t nonterminated = 0;
};

/// Runs `trials` independent executions with initial states drawn from
/// rho0 and reports per-edge visit counts and empirical branch
/// frequencies. Identical seeds give identical reports.
MonteCarloReport run_monte_carlo(const Program& p, const ProbVector& rho0,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t max_steps = 1000000);

}  // namespace pdfa
