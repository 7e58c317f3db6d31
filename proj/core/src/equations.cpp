#include "pdfa/equations.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>

namespace pdfa {

namespace {

ProbVector evaluate(const VecEquation& eq,
                    const std::vector<ProbVector>& values, std::size_t dim) {
  ProbVector acc = eq.constant.dim() == dim ? eq.constant : ProbVector(dim);
  for (const VecTerm& t : eq.terms) {
    const ProbVector& u = values[t.unknown];
    ProbVector contrib = t.coeff ? u * *t.coeff : u;
    if (t.scalar != 1.0) contrib = contrib.scaled(t.scalar);
    acc = acc + contrib;
  }
  return acc;
}

/// Kahn topological order of the unknown dependency graph, if acyclic.
std::optional<std::vector<std::size_t>> topological_order(
    const VectorEquationSystem& sys) {
  std::size_t n = sys.equations.size();
  std::vector<std::vector<std::size_t>> dependents(n);
  std::vector<std::size_t> missing(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (const VecTerm& t : sys.equations[k].terms) {
      dependents[t.unknown].push_back(k);
      ++missing[k];
    }
  }
  std::deque<std::size_t> ready;
  for (std::size_t k = 0; k < n; ++k)
    if (missing[k] == 0) ready.push_back(k);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t k = ready.front();
    ready.pop_front();
    order.push_back(k);
    for (std::size_t d : dependents[k])
      if (--missing[d] == 0) ready.push_back(d);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

SolveResult solve_direct(const VectorEquationSystem& sys) {
  // Stack the unknowns into one row vector U; the system U = U M + C
  // becomes (I - M^t) U^t = C^t.
  std::size_t n = sys.equations.size();
  std::size_t dim = sys.dim;
  Eigen::Index total = static_cast<Eigen::Index>(n * dim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(total, total);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(total);
  for (std::size_t k = 0; k < n; ++k) {
    const VecEquation& eq = sys.equations[k];
    if (eq.constant.dim() == dim)
      for (std::size_t j = 0; j < dim; ++j)
        c(static_cast<Eigen::Index>(k * dim + j)) = eq.constant[j];
    for (const VecTerm& t : eq.terms) {
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t col = 0; col < dim; ++col) {
          double x = t.coeff ? t.coeff->at(r, col) : (r == col ? 1.0 : 0.0);
          m(static_cast<Eigen::Index>(t.unknown * dim + r),
            static_cast<Eigen::Index>(k * dim + col)) += t.scalar * x;
        }
    }
  }
  Eigen::MatrixXd lhs =
      Eigen::MatrixXd::Identity(total, total) - m.transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
  if (!lu.isInvertible())
    throw SolverError("equation system is singular (stacked rank " +
                      std::to_string(lu.rank()) + " of " +
                      std::to_string(total) + ")");
  Eigen::VectorXd u = lu.solve(c);

  SolveResult res;
  res.method = SolveMethod::Direct;
  res.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    ProbVector v(dim);
    for (std::size_t j = 0; j < dim; ++j)
      v[j] = u(static_cast<Eigen::Index>(k * dim + j));
    res.values.push_back(std::move(v));
  }
  res.residual = system_residual(sys, res.values);
  return res;
}

}  // namespace

double system_residual(const VectorEquationSystem& sys,
                       const std::vector<ProbVector>& values) {
  double r = 0.0;
  for (std::size_t k = 0; k < sys.equations.size(); ++k) {
    ProbVector expect = evaluate(sys.equations[k], values, sys.dim);
    r = std::max(r, expect.max_abs_diff(values[k]));
  }
  return r;
}

SolveResult solve_linear_system(const VectorEquationSystem& sys,
                                const SolveOptions& opts) {
  std::size_t n = sys.equations.size();
  for (const VecEquation& eq : sys.equations)
    for (const VecTerm& t : eq.terms)
      if (t.unknown >= n)
        throw InputError("equation references an unknown out of range");

  if (auto order = topological_order(sys)) {
    SolveResult res;
    res.method = SolveMethod::Topological;
    res.values.assign(n, ProbVector(sys.dim));
    for (std::size_t k : *order)
      res.values[k] = evaluate(sys.equations[k], res.values, sys.dim);
    res.residual = system_residual(sys, res.values);
    return res;
  }

  // Cyclic: Gauss-Seidel sweeps from zero.
  SolveResult res;
  res.method = SolveMethod::FixedPoint;
  res.values.assign(n, ProbVector(sys.dim));
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    double delta = 0.0;
    double magnitude = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      ProbVector next = evaluate(sys.equations[k], res.values, sys.dim);
      delta = std::max(delta, next.max_abs_diff(res.values[k]));
      res.values[k] = std::move(next);
      for (double x : res.values[k].data())
        magnitude = std::max(magnitude, std::abs(x));
    }
    if (magnitude > opts.divergence_bound)
      throw SolverError(
          "fixed-point iteration diverges (magnitude " +
          std::to_string(magnitude) + " after " + std::to_string(iter) +
          " sweeps); the system has no finite solution reachable from 0");
    if (delta <= opts.tol) {
      res.iterations = iter;
      res.residual = system_residual(sys, res.values);
      return res;
    }
  }

  // Iteration budget exhausted; try the dense solve before giving up.
  SolveResult direct = solve_direct(sys);
  if (direct.residual <= std::max(opts.tol, 1e-8)) return direct;
  throw SolverError("fixed-point iteration did not converge in " +
                    std::to_string(opts.max_iter) +
                    " sweeps and the direct solve left residual " +
                    std::to_string(direct.residual));
}

}  // namespace pdfa
