#include "pdfa/semantics.hpp"

#include <algorithm>
#include <cmath>

namespace pdfa {

StateSpace::StateSpace(VarDecls decls) : decls_(std::move(decls)) {
  if (decls_.count() == 0) throw InputError("state space needs variables");
  stride_.assign(decls_.count(), 1);
  for (std::size_t i = decls_.count(); i-- > 1;)
    stride_[i - 1] = stride_[i] * static_cast<std::size_t>(decls_.at(i).size);
  size_ = stride_[0] * static_cast<std::size_t>(decls_.at(0).size);
}

std::size_t StateSpace::index(const StateTuple& s) const {
  if (s.size() != decls_.count())
    throw InputError("state tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= decls_.at(i).size)
      throw InputError("state value out of range for '" + decls_.at(i).name +
                       "'");
    idx += static_cast<std::size_t>(s[i]) * stride_[i];
  }
  return idx;
}

StateTuple StateSpace::state(std::size_t index) const {
  if (index >= size_) throw InputError("state index out of range");
  StateTuple s(decls_.count());
  for (std::size_t i = 0; i < decls_.count(); ++i) {
    s[i] = static_cast<long long>(index / stride_[i]);
    index %= stride_[i];
  }
  return s;
}

Enumeration<StateTuple> StateSpace::enumeration() const {
  std::vector<StateTuple> elems;
  elems.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) elems.push_back(state(i));
  return Enumeration<StateTuple>(std::move(elems));
}

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long long reduce_to_range(long long value, long long size) {
  long long r = value % size;
  return r < 0 ? r + size : r;
}

long long eval_expr(const Expr& e, const StateTuple& s, const StateSpace& ss) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.value;
    case Expr::Kind::Var:
      return s[ss.decls().index_of(e.var)];
    case Expr::Kind::Add:
      return eval_expr(*e.lhs, s, ss) + eval_expr(*e.rhs, s, ss);
    case Expr::Kind::Sub:
      return eval_expr(*e.lhs, s, ss) - eval_expr(*e.rhs, s, ss);
    case Expr::Kind::Mul:
      return eval_expr(*e.lhs, s, ss) * eval_expr(*e.rhs, s, ss);
    case Expr::Kind::Mod: {
      long long a = eval_expr(*e.lhs, s, ss);
      long long b = eval_expr(*e.rhs, s, ss);
      if (b == 0) throw InputError("modulo by zero");
      long long r = a % b;
      return (r != 0 && ((r < 0) != (b < 0))) ? r + b : r;
    }
  }
  throw InputError("unreachable expression kind");
}

bool eval_bexpr(const BExpr& b, const StateTuple& s, const StateSpace& ss) {
  switch (b.kind) {
    case BExpr::Kind::True:
      return true;
    case BExpr::Kind::False:
      return false;
    case BExpr::Kind::Cmp: {
      long long l = eval_expr(*b.lhs, s, ss);
      long long r = eval_expr(*b.rhs, s, ss);
      switch (b.op) {
        case BExpr::CmpOp::Lt:
          return l < r;
        case BExpr::CmpOp::Le:
          return l <= r;
        case BExpr::CmpOp::Eq:
          return l == r;
        case BExpr::CmpOp::Gt:
          return l > r;
        case BExpr::CmpOp::Ge:
          return l >= r;
      }
      return false;
    }
    case BExpr::Kind::Prime:
      return is_prime(eval_expr(*b.lhs, s, ss));
    case BExpr::Kind::Not:
      return !eval_bexpr(*b.a, s, ss);
    case BExpr::Kind::And:
      return eval_bexpr(*b.a, s, ss) && eval_bexpr(*b.b, s, ss);
    case BExpr::Kind::Or:
      return eval_bexpr(*b.a, s, ss) || eval_bexpr(*b.b, s, ss);
  }
  throw InputError("unreachable test kind");
}

DenseMatrix block_matrix(const BlockInfo& block, const StateSpace& ss,
                         std::size_t entry_cap) {
  const std::size_t n = ss.size();
  switch (block.kind) {
    case BlockKind::Skip:
      return DenseMatrix::identity(n, entry_cap);
    case BlockKind::Assign: {
      DenseMatrix m(n, n, entry_cap);
      std::size_t v = ss.decls().index_of(block.var);
      long long range = ss.decls().at(v).size;
      for (std::size_t i = 0; i < n; ++i) {
        StateTuple s = ss.state(i);
        s[v] = reduce_to_range(eval_expr(*block.expr, s, ss), range);
        m.at(i, ss.index(s)) = 1.0;
      }
      return m;
    }
    case BlockKind::Random: {
      DenseMatrix m(n, n, entry_cap);
      std::size_t v = ss.decls().index_of(block.var);
      for (std::size_t i = 0; i < n; ++i) {
        StateTuple s = ss.state(i);
        for (auto& [value, p] : block.dist.entries) {
          s[v] = value;
          m.at(i, ss.index(s)) += p;
        }
      }
      return m;
    }
    case BlockKind::Test:
      throw InputError("tests have projections, not transfer matrices");
  }
  throw InputError("unreachable block kind");
}

std::vector<double> test_diagonal(const BExpr& b, const StateSpace& ss) {
  std::vector<double> d(ss.size(), 0.0);
  for (std::size_t i = 0; i < ss.size(); ++i)
    if (eval_bexpr(b, ss.state(i), ss)) d[i] = 1.0;
  return d;
}

DenseMatrix test_matrix(const BExpr& b, const StateSpace& ss,
                        std::size_t entry_cap) {
  DenseMatrix m(ss.size(), ss.size(), entry_cap);
  std::vector<double> d = test_diagonal(b, ss);
  for (std::size_t i = 0; i < ss.size(); ++i) m.at(i, i) = d[i];
  return m;
}

double branch_probability(const ProbVector& rho, const DenseMatrix& proj) {
  return one_norm(rho * proj);
}

double Rng::uniform() {
  // splitmix64 stream; take the top 53 bits for the mantissa.
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + (trial + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

long long sample(const DistLiteral& d, Rng& rng) {
  double u = rng.uniform();
  for (auto& [value, p] : d.entries) {
    if (u < p) return value;
    u -= p;
  }
  return d.entries.back().first;
}

}  // namespace

Config sos_step(const Config& c, const StateSpace& ss, Rng& rng) {
  if (c.stopped()) throw InputError("cannot step a stopped configuration");
  const Stmt& s = *c.rest;
  switch (s.kind) {
    case Stmt::Kind::Skip:
      return {nullptr, c.state};
    case Stmt::Kind::Assign: {
      StateTuple next = c.state;
      std::size_t v = ss.decls().index_of(s.var);
      next[v] =
          reduce_to_range(eval_expr(*s.expr, c.state, ss), ss.decls().at(v).size);
      return {nullptr, std::move(next)};
    }
    case Stmt::Kind::Random: {
      StateTuple next = c.state;
      next[ss.decls().index_of(s.var)] = sample(s.dist, rng);
      return {nullptr, std::move(next)};
    }
    case Stmt::Kind::Seq: {
      Config head = sos_step({s.first, c.state}, ss, rng);
      if (head.stopped()) return {s.second, std::move(head.state)};
      return {Stmt::seq(head.rest, s.second), std::move(head.state)};
    }
    case Stmt::Kind::If:
      return {eval_bexpr(*s.cond, c.state, ss) ? s.first : s.second, c.state};
    case Stmt::Kind::While:
      if (eval_bexpr(*s.cond, c.state, ss))
        return {Stmt::seq(s.first, c.rest), c.state};
      return {nullptr, c.state};
  }
  throw InputError("unreachable statement kind");
}

MonteCarloReport run_monte_carlo(const Program& p, const ProbVector& rho0,
                                 std::uint64_t trials, std::uint64_t seed,
                                 std::uint64_t max_steps) {
  StateSpace ss(p.decls);
  if (rho0.dim() != ss.size())
    throw InputError("initial distribution has wrong dimension");
  if (!rho0.is_distribution(1e-6))
    throw InputError("initial vector is not a distribution");

  std::map<std::pair<Label, Label>, std::uint64_t> edge_counts;
  std::map<Label, std::uint64_t> visits;
  std::uint64_t nonterminated = 0;

  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, t));
    // Draw the initial state from rho0 by inverse transform; rounding
    // residue falls onto the last state of positive mass.
    double u = rng.uniform();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < rho0.dim(); ++i) {
      if (rho0[i] <= 0.0) continue;
      idx = i;
      if (u < rho0[i]) break;
      u -= rho0[i];
    }
    Config c{p.body, ss.state(idx)};
    std::uint64_t steps = 0;
    Label at = init_label(*c.rest);
    while (!c.stopped()) {
      if (steps++ >= max_steps) {
        ++nonterminated;
        break;
      }
      ++visits[at];
      c = sos_step(c, ss, rng);
      if (!c.stopped()) {
        Label next = init_label(*c.rest);
        ++edge_counts[{at, next}];
        at = next;
      }
    }
  }

  MonteCarloReport report;
  report.trials = trials;
  report.nonterminated = nonterminated;
  report.visits = visits;
  for (auto& [edge, count] : edge_counts) {
    EdgeCount ec;
    ec.from = edge.first;
    ec.to = edge.second;
    ec.count = count;
    std::uint64_t from_visits = visits.count(edge.first) ? visits[edge.first] : 0;
    ec.frequency =
        from_visits == 0
            ? 0.0
            : static_cast<double>(count) / static_cast<double>(from_visits);
    report.edges.push_back(ec);
  }
  return report;
}

}  // namespace pdfa
