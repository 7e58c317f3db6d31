#pragma once

#include <string>
#include <vector>

#include "pdfa/linalg.hpp"
#include "pdfa/semantics.hpp"

namespace pdfa {

/// A state-space abstraction: a partition of the source enumeration
/// together with its classification matrix and pseudo-inverse. Where a
/// partition comes from a predicate, the true class sits at index 0.
struct Abstraction {
  std::string name;
  std::size_t source_size = 0;
  std::vector<std::size_t> class_of;  // source index -> class index
  std::vector<std::string> class_names;
  DenseMatrix a;         // source_size x classes
  DenseMatrix a_dagger;  // classes x source_size

  std::size_t classes() const { return class_names.size(); }

  static Abstraction from_partition(std::string name,
                                    std::vector<std::size_t> class_of,
                                    std::vector<std::string> class_names);

  static Abstraction identity(std::size_t n);
  /// Everything into one class ("*").
  static Abstraction forgetful(std::size_t n);
  /// Values 0..n-1 split into even (class 0) and odd (class 1).
  static Abstraction parity(std::size_t n);
  /// Values 0..n-1 split into prime (class 0) and non-prime (class 1).
  static Abstraction primality(std::size_t n);

  /// Tensor composition: classes are pairs, the classification matrix is
  /// the Kronecker product.
  static Abstraction compose(const Abstraction& x, const Abstraction& y);
};

/// Per-variable abstraction spec, e.g. "forgetful:z,parity:x" or "id".
/// Unmentioned variables keep the identity abstraction; the result is
/// the Kronecker product in declaration order.
Abstraction parse_abstraction_spec(const std::string& spec,
                                   const StateSpace& ss);

/// rho^: mass of each equivalence class.
ProbVector lift_distribution(const ProbVector& rho, const Abstraction& abs);

/// Abstract test matrix a^+ P(b) a, computed from the diagonal of P(b)
/// so the concrete projection is never materialized.
DenseMatrix abstract_test(const BExpr& b, const Abstraction& abs,
                          const StateSpace& ss);
DenseMatrix abstract_test_diag(const std::vector<double>& diag,
                               const Abstraction& abs);

/// a^+ F a for an elementary block, accumulated index-by-index from the
/// block semantics so the concrete matrix never needs to fit the cap.
DenseMatrix lifted_block_matrix(const BlockInfo& block, const StateSpace& ss,
                                const Abstraction& abs);

/// |rho P(b) a - rho^ P^(b)|_max: zero exactly when the partition
/// refines the test.
double compatibility_residual(const ProbVector& rho, const BExpr& b,
                              const Abstraction& abs, const StateSpace& ss);

/// The four abstract-test matrices over values 0..n-1 used to judge how
/// predictive parity is of primality and vice versa:
///   parity-abstracted prime test, its complement,
///   primality-abstracted even test, its complement.
struct QualityTable {
  std::size_t n;
  DenseMatrix parity_prime;
  DenseMatrix parity_nonprime;
  DenseMatrix primality_even;
  DenseMatrix primality_odd;
};

QualityTable quality_table(std::size_t n);

/// Rounds to two decimal places, the rendering used by the text report.
double round2(double x);

}  // namespace pdfa
