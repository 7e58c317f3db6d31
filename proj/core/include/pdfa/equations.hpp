#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdfa/linalg.hpp"

namespace pdfa {

/// One summand of a vector equation: scalar * u[unknown] * coeff, with a
/// missing coeff standing for the identity.
struct VecTerm {
  std::size_t unknown;
  double scalar = 1.0;
  std::optional<DenseMatrix> coeff;
};

/// u[k] = sum(terms) + constant. Every unknown is defined by exactly one
/// equation; all unknowns share one dimension.
struct VecEquation {
  std::vector<VecTerm> terms;
  ProbVector constant;
};

struct VectorEquationSystem {
  std::size_t dim = 0;
  std::vector<VecEquation> equations;
};

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 100000;
  /// Values beyond this bound mean the iteration is running away.
  double divergence_bound = 1e12;
};

enum class SolveMethod { Topological, FixedPoint, Direct };

struct SolveResult {
  std::vector<ProbVector> values;
  SolveMethod method = SolveMethod::Topological;
  int iterations = 0;
  double residual = 0.0;
};

/// Solves the system: acyclic dependency graphs by exact substitution in
/// topological order, cyclic ones by fixed-point iteration with a dense
/// (I - M) solve as fallback. Throws SolverError with diagnostics when
/// the iteration diverges and the stacked system is singular.
SolveResult solve_linear_system(const VectorEquationSystem& sys,
                                const SolveOptions& opts = {});

/// Max-abs residual of a candidate assignment, |u - (u M + c)|.
double system_residual(const VectorEquationSystem& sys,
                       const std::vector<ProbVector>& values);

}  // namespace pdfa
