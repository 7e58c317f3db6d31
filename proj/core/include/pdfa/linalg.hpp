#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pdfa/errors.hpp"

namespace pdfa {

/// Default cap on the number of entries of any constructed matrix.
inline constexpr std::size_t kDefaultEntryCap = std::size_t{1} << 20;

/// A fixed enumeration of a finite set: element(i) and index(x) are
/// mutually inverse.
template <typename T>
class Enumeration {
public:
  Enumeration() = default;
  explicit Enumeration(std::vector<T> elems) : elems_(std::move(elems)) {
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      auto [it, fresh] = index_.emplace(elems_[i], i);
      if (!fresh) throw InputError("enumeration contains a repeated element");
    }
  }

  std::size_t size() const { return elems_.size(); }
  const T& element(std::size_t i) const { return elems_.at(i); }
  const std::vector<T>& elements() const { return elems_; }

  std::size_t index(const T& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) throw InputError("element not in enumeration");
    return it->second;
  }
  bool contains(const T& x) const { return index_.count(x) != 0; }

private:
  std::vector<T> elems_;
  std::map<T, std::size_t> index_;
};

/// Dense row-major real matrix. Row vectors multiply on the left:
/// y = x * A.
class DenseMatrix {
public:
  DenseMatrix() : rows_(0), cols_(0) {}
  DenseMatrix(std::size_t rows, std::size_t cols,
              std::size_t entry_cap = kDefaultEntryCap);

  static DenseMatrix identity(std::size_t n,
                              std::size_t entry_cap = kDefaultEntryCap);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  DenseMatrix transpose() const;
  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix operator+(const DenseMatrix& rhs) const;
  DenseMatrix operator-(const DenseMatrix& rhs) const;
  DenseMatrix scaled(double s) const;

  /// Largest absolute entry difference; matrices of unequal shape are
  /// infinitely far apart.
  double max_abs_diff(const DenseMatrix& other) const;
  bool all_finite() const;

private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// Row vector over an enumerated set. Distributions are the nonnegative
/// vectors of 1-norm 1; occupancy measures drop the normalization.
class ProbVector {
public:
  ProbVector() = default;
  explicit ProbVector(std::size_t dim) : data_(dim, 0.0) {}
  explicit ProbVector(std::vector<double> entries) : data_(std::move(entries)) {}

  static ProbVector uniform(std::size_t dim);
  static ProbVector point_mass(std::size_t dim, std::size_t index);

  std::size_t dim() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  const std::vector<double>& data() const { return data_; }

  ProbVector operator*(const DenseMatrix& m) const;
  ProbVector operator+(const ProbVector& rhs) const;
  ProbVector scaled(double s) const;

  double max_abs_diff(const ProbVector& other) const;
  bool is_distribution(double tol = 1e-9) const;
  /// Scales to 1-norm 1. Throws InputError on the zero vector.
  ProbVector normalized() const;

private:
  std::vector<double> data_;
};

double one_norm(const ProbVector& v);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b,
                 std::size_t entry_cap = kDefaultEntryCap);
ProbVector kron(const ProbVector& a, const ProbVector& b,
                std::size_t entry_cap = kDefaultEntryCap);

/// 0/1 linear representation of a total function between enumerated sets:
/// one 1 per row, at the image's column.
template <typename X, typename Y, typename F>
DenseMatrix lin_rep(F&& f, const Enumeration<X>& ex, const Enumeration<Y>& ey,
                    std::size_t entry_cap = kDefaultEntryCap) {
  DenseMatrix m(ex.size(), ey.size(), entry_cap);
  for (std::size_t i = 0; i < ex.size(); ++i)
    m.at(i, ey.index(f(ex.element(i)))) = 1.0;
  return m;
}

/// Diagonal 0/1 projection of a predicate over an enumerated set.
template <typename X, typename P>
DenseMatrix pred_rep(P&& p, const Enumeration<X>& ex,
                     std::size_t entry_cap = kDefaultEntryCap) {
  DenseMatrix m(ex.size(), ex.size(), entry_cap);
  for (std::size_t i = 0; i < ex.size(); ++i)
    if (p(ex.element(i))) m.at(i, i) = 1.0;
  return m;
}

/// Diagonal of pred_rep as a plain 0/1 vector; the cheap form used when
/// the full |X| x |X| projection would be pointless to materialize.
template <typename X, typename P>
std::vector<double> pred_diag(P&& p, const Enumeration<X>& ex) {
  std::vector<double> d(ex.size(), 0.0);
  for (std::size_t i = 0; i < ex.size(); ++i)
    if (p(ex.element(i))) d[i] = 1.0;
  return d;
}

/// Classification matrix of a partition given by per-element class ids in
/// 0..k-1: row i carries a single 1 in column class_of[i].
DenseMatrix classification_matrix(const std::vector<std::size_t>& class_of,
                                  std::size_t num_classes,
                                  std::size_t entry_cap = kDefaultEntryCap);

/// Partition given extensionally, as element lists per class.
template <typename X>
DenseMatrix classification_matrix(const std::vector<std::vector<X>>& classes,
                                  const Enumeration<X>& ex,
                                  std::size_t entry_cap = kDefaultEntryCap) {
  std::vector<std::size_t> class_of(ex.size(), classes.size());
  std::size_t covered = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (const X& x : classes[c]) {
      std::size_t i = ex.index(x);
      if (class_of[i] != classes.size())
        throw InputError("classes overlap: not a partition");
      class_of[i] = c;
      ++covered;
    }
  }
  if (covered != ex.size())
    throw InputError("classes do not cover the set: not a partition");
  return classification_matrix(class_of, classes.size(), entry_cap);
}

/// True if m is 0/1 with exactly one 1 per row (a classification matrix).
bool is_classification_matrix(const DenseMatrix& m);

struct PenroseReport {
  double aga;      // max-abs of A*G*A - A
  double gag;      // max-abs of G*A*G - G
  double ag_sym;   // max-abs of (A*G)^t - A*G
  double ga_sym;   // max-abs of (G*A)^t - G*A
  double worst() const;
};

PenroseReport check_penrose(const DenseMatrix& a, const DenseMatrix& g);

/// Moore-Penrose pseudo-inverse. Classification matrices take the exact
/// closed form (transpose with rows scaled by inverse class sizes); full
/// column rank goes through the normal equations; everything else falls
/// back to Newton iteration accepted only once the four Penrose
/// identities hold within tol.
DenseMatrix pseudo_inverse(const DenseMatrix& a, double tol = 1e-8);

/// Abstract operator induced by abstraction a: a^+ * f * a.
DenseMatrix lift_operator(const DenseMatrix& f, const DenseMatrix& a);

/// Solves x * a = b for square a. Throws SolverError when singular.
ProbVector solve_row_system(const DenseMatrix& a, const ProbVector& b);

}  // namespace pdfa
