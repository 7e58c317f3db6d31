#pragma once

#include <Eigen/Dense>

#include <vector>

#include "pdfa/equations.hpp"

namespace pdfa::testing {

/// Independent dense solve of a stacked vector equation system. This is
/// the reference the production solver is checked against; it shares no
/// code with it.
inline std::vector<ProbVector> oracle_solve(const VectorEquationSystem& sys) {
  std::size_t n = sys.equations.size();
  std::size_t d = sys.dim;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n * d, n * d);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n * d);
  for (std::size_t k = 0; k < n; ++k) {
    const VecEquation& eq = sys.equations[k];
    if (eq.constant.dim() == d)
      for (std::size_t j = 0; j < d; ++j) c(k * d + j) = eq.constant[j];
    for (const VecTerm& t : eq.terms)
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t col = 0; col < d; ++col) {
          double x = t.coeff ? t.coeff->at(r, col) : (r == col ? 1.0 : 0.0);
          m(t.unknown * d + r, k * d + col) += t.scalar * x;
        }
  }
  Eigen::VectorXd u = (Eigen::MatrixXd::Identity(n * d, n * d) - m.transpose())
                          .fullPivLu()
                          .solve(c);
  std::vector<ProbVector> out;
  for (std::size_t k = 0; k < n; ++k) {
    ProbVector v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = u(k * d + j);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace pdfa::testing
