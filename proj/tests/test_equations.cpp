#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pdfa/equations.hpp"

using namespace pdfa;

namespace {

DenseMatrix scalar_matrix(double v) {
  DenseMatrix m(1, 1);
  m.at(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("scalar geometric equation: x = 0.5 x + c") {
  VectorEquationSystem sys;
  sys.dim = 1;
  VecEquation eq;
  eq.terms.push_back({0, 0.5, std::nullopt});
  eq.constant = ProbVector(std::vector<double>{3.0});
  sys.equations.push_back(eq);
  SolveResult res = solve_linear_system(sys);
  CHECK(res.method == SolveMethod::FixedPoint);
  CHECK(res.values[0][0] == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(res.residual <= 1e-9);
}

TEST_CASE("acyclic chains are solved exactly by substitution") {
  // u0 = c, u1 = u0 M, u2 = u1 M + u0
  VectorEquationSystem sys;
  sys.dim = 2;
  DenseMatrix m(2, 2);
  m.at(0, 0) = 0.25;
  m.at(0, 1) = 0.75;
  m.at(1, 0) = 0.5;
  m.at(1, 1) = 0.5;
  VecEquation e0;
  e0.constant = ProbVector(std::vector<double>{1.0, 0.0});
  VecEquation e1;
  e1.terms.push_back({0, 1.0, m});
  VecEquation e2;
  e2.terms.push_back({1, 1.0, m});
  e2.terms.push_back({0, 1.0, std::nullopt});
  sys.equations = {e0, e1, e2};
  SolveResult res = solve_linear_system(sys);
  CHECK(res.method == SolveMethod::Topological);
  // Hand substitution oracle.
  ProbVector u0(std::vector<double>{1.0, 0.0});
  ProbVector u1 = u0 * m;
  ProbVector u2 = u1 * m + u0;
  CHECK(res.values[1].max_abs_diff(u1) == 0.0);
  CHECK(res.values[2].max_abs_diff(u2) == 0.0);
  CHECK(res.residual == 0.0);
}

TEST_CASE("cyclic contraction matches the direct solve") {
  // u0 = u1 A + c, u1 = u0 B : a two-unknown loop with spectral radius
  // well under one.
  VectorEquationSystem sys;
  sys.dim = 2;
  DenseMatrix a = scalar_matrix(0.0);
  a = DenseMatrix(2, 2);
  a.at(0, 0) = 0.3;
  a.at(0, 1) = 0.1;
  a.at(1, 0) = 0.2;
  a.at(1, 1) = 0.4;
  DenseMatrix b(2, 2);
  b.at(0, 0) = 0.5;
  b.at(0, 1) = 0.2;
  b.at(1, 0) = 0.1;
  b.at(1, 1) = 0.3;
  VecEquation e0;
  e0.terms.push_back({1, 1.0, a});
  e0.constant = ProbVector(std::vector<double>{1.0, 2.0});
  VecEquation e1;
  e1.terms.push_back({0, 1.0, b});
  sys.equations = {e0, e1};

  SolveResult iterated = solve_linear_system(sys);
  CHECK(iterated.method == SolveMethod::FixedPoint);
  CHECK(iterated.residual <= 1e-9);

  // Force the direct path by refusing the iteration any sweeps to
  // cross-check the two routes on the same system.
  SolveOptions direct_only;
  direct_only.max_iter = 1;
  SolveResult direct = solve_linear_system(sys, direct_only);
  CHECK(direct.method == SolveMethod::Direct);
  for (std::size_t k = 0; k < 2; ++k)
    CHECK(iterated.values[k].max_abs_diff(direct.values[k]) <= 1e-8);
}

TEST_CASE("diverging systems are reported, not returned") {
  // x = 2x + 1 runs away from zero.
  VectorEquationSystem sys;
  sys.dim = 1;
  VecEquation eq;
  eq.terms.push_back({0, 2.0, std::nullopt});
  eq.constant = ProbVector(std::vector<double>{1.0});
  sys.equations = {eq};
  CHECK_THROWS_AS(solve_linear_system(sys), SolverError);
}

TEST_CASE("singular systems are reported by the direct fallback") {
  // x = x + 1 has no solution; iteration walks off and the stacked
  // system is singular.
  VectorEquationSystem sys;
  sys.dim = 1;
  VecEquation eq;
  eq.terms.push_back({0, 1.0, std::nullopt});
  eq.constant = ProbVector(std::vector<double>{1.0});
  sys.equations = {eq};
  CHECK_THROWS_AS(solve_linear_system(sys), SolverError);
}

TEST_CASE("probability-one loop without progress is singular") {
  // u0 = u1, u1 = u0: any value solves it; the solver must not claim a
  // unique answer. Iteration settles at zero immediately (a fixpoint),
  // so this documents that degenerate loops converge to the least one.
  VectorEquationSystem sys;
  sys.dim = 1;
  VecEquation e0;
  e0.terms.push_back({1, 1.0, std::nullopt});
  VecEquation e1;
  e1.terms.push_back({0, 1.0, std::nullopt});
  sys.equations = {e0, e1};
  SolveResult res = solve_linear_system(sys);
  CHECK(res.values[0][0] == 0.0);
  CHECK(res.values[1][0] == 0.0);

  // The same loop with mass injected never settles; the direct solve
  // sees the singular stacked matrix and says so.
  sys.equations[0].constant = ProbVector(std::vector<double>{1.0});
  CHECK_THROWS_AS(solve_linear_system(sys), SolverError);
}

TEST_CASE("residual of a candidate assignment") {
  VectorEquationSystem sys;
  sys.dim = 1;
  VecEquation eq;
  eq.constant = ProbVector(std::vector<double>{2.0});
  sys.equations = {eq};
  CHECK(system_residual(sys, {ProbVector(std::vector<double>{2.0})}) == 0.0);
  CHECK(system_residual(sys, {ProbVector(std::vector<double>{1.0})}) == 1.0);
}
