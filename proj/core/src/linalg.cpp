#include "pdfa/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdfa {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMajor> as_eigen(const DenseMatrix& m) {
  return {m.data().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

DenseMatrix from_eigen(const EigenRowMajor& e) {
  DenseMatrix m(static_cast<std::size_t>(e.rows()),
                static_cast<std::size_t>(e.cols()));
  std::copy(e.data(), e.data() + e.size(), m.data().begin());
  return m;
}

void check_cap(std::size_t rows, std::size_t cols, std::size_t cap) {
  if (rows != 0 && cols > cap / rows)
    throw SizeError("matrix of " + std::to_string(rows) + "x" +
                    std::to_string(cols) + " entries exceeds the cap of " +
                    std::to_string(cap));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::size_t entry_cap)
    : rows_(rows), cols_(cols) {
  check_cap(rows, cols, entry_cap);
  data_.assign(rows * cols, 0.0);
}

DenseMatrix DenseMatrix::identity(std::size_t n, std::size_t entry_cap) {
  DenseMatrix m(n, n, entry_cap);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw InputError("matrix product dimension mismatch");
  EigenRowMajor p = as_eigen(*this) * as_eigen(rhs);
  return from_eigen(p);
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InputError("matrix sum dimension mismatch");
  DenseMatrix s(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    s.data_[i] = data_[i] + rhs.data_[i];
  return s;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw InputError("matrix difference dimension mismatch");
  DenseMatrix s(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    s.data_[i] = data_[i] - rhs.data_[i];
  return s;
}

DenseMatrix DenseMatrix::scaled(double s) const {
  DenseMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) m.data_[i] = data_[i] * s;
  return m;
}

double DenseMatrix::max_abs_diff(const DenseMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i)
    d = std::max(d, std::abs(data_[i] - other.data_[i]));
  return d;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

ProbVector ProbVector::uniform(std::size_t dim) {
  ProbVector v(dim);
  for (auto& x : v.data_) x = 1.0 / static_cast<double>(dim);
  return v;
}

ProbVector ProbVector::point_mass(std::size_t dim, std::size_t index) {
  ProbVector v(dim);
  v.data_.at(index) = 1.0;
  return v;
}

ProbVector ProbVector::operator*(const DenseMatrix& m) const {
  if (dim() != m.rows()) throw InputError("vector-matrix dimension mismatch");
  ProbVector out(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double x = data_[r];
    if (x == 0.0) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += x * m.at(r, c);
  }
  return out;
}

ProbVector ProbVector::operator+(const ProbVector& rhs) const {
  if (dim() != rhs.dim()) throw InputError("vector sum dimension mismatch");
  ProbVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = data_[i] + rhs.data_[i];
  return out;
}

ProbVector ProbVector::scaled(double s) const {
  ProbVector out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = data_[i] * s;
  return out;
}

double ProbVector::max_abs_diff(const ProbVector& other) const {
  if (dim() != other.dim()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < dim(); ++i)
    d = std::max(d, std::abs(data_[i] - other.data_[i]));
  return d;
}

bool ProbVector::is_distribution(double tol) const {
  double sum = 0.0;
  for (double x : data_) {
    if (x < -tol) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

ProbVector ProbVector::normalized() const {
  double n = one_norm(*this);
  if (n == 0.0) throw InputError("cannot normalize a zero vector");
  return scaled(1.0 / n);
}

double one_norm(const ProbVector& v) {
  double s = 0.0;
  for (double x : v.data()) s += std::abs(x);
  return s;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b,
                 std::size_t entry_cap) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), entry_cap);
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      double x = a.at(ar, ac);
      if (x == 0.0) continue;
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out.at(ar * b.rows() + br, ac * b.cols() + bc) = x * b.at(br, bc);
    }
  return out;
}

ProbVector kron(const ProbVector& a, const ProbVector& b,
                std::size_t entry_cap) {
  check_cap(a.dim(), b.dim(), entry_cap);
  ProbVector out(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j)
      out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

DenseMatrix classification_matrix(const std::vector<std::size_t>& class_of,
                                  std::size_t num_classes,
                                  std::size_t entry_cap) {
  DenseMatrix m(class_of.size(), num_classes, entry_cap);
  for (std::size_t i = 0; i < class_of.size(); ++i) {
    if (class_of[i] >= num_classes)
      throw InputError("class id out of range: not a partition");
    m.at(i, class_of[i]) = 1.0;
  }
  return m;
}

bool is_classification_matrix(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return false;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::size_t ones = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      double x = m.at(r, c);
      if (x == 1.0)
        ++ones;
      else if (x != 0.0)
        return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

double PenroseReport::worst() const {
  return std::max(std::max(aga, gag), std::max(ag_sym, ga_sym));
}

PenroseReport check_penrose(const DenseMatrix& a, const DenseMatrix& g) {
  DenseMatrix ag = a * g;
  DenseMatrix ga = g * a;
  PenroseReport r;
  r.aga = (ag * a).max_abs_diff(a);
  r.gag = (ga * g).max_abs_diff(g);
  r.ag_sym = ag.transpose().max_abs_diff(ag);
  r.ga_sym = ga.transpose().max_abs_diff(ga);
  return r;
}

namespace {

DenseMatrix classification_pinverse(const DenseMatrix& a) {
  std::vector<double> class_size(a.cols(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) class_size[c] += a.at(r, c);
  DenseMatrix g(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (a.at(r, c) == 1.0) g.at(c, r) = 1.0 / class_size[c];
  return g;
}

// Newton iteration X <- X (2I - A X); converges to the pseudo-inverse from
// X0 = A^t / (|A|_1 |A|_inf) for any A.
DenseMatrix iterative_pinverse(const DenseMatrix& a, double tol) {
  auto ea = as_eigen(a);
  double norm1 = ea.cwiseAbs().colwise().sum().maxCoeff();
  double norminf = ea.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm1 == 0.0 || norminf == 0.0)
    return DenseMatrix(a.cols(), a.rows());  // pseudo-inverse of 0 is 0
  EigenRowMajor x = ea.transpose() / (norm1 * norminf);
  DenseMatrix best = from_eigen(x);
  double best_err = check_penrose(a, best).worst();
  for (int iter = 0; iter < 200; ++iter) {
    x = x * (2.0 * EigenRowMajor::Identity(ea.rows(), ea.rows()) - ea * x);
    DenseMatrix cand = from_eigen(x);
    if (!cand.all_finite()) break;
    double err = check_penrose(a, cand).worst();
    if (err < best_err) {
      best = cand;
      best_err = err;
    }
    if (err <= tol) return cand;
  }
  throw SolverError(
      "pseudo-inverse iteration did not reach the Penrose identities "
      "(best residual " +
      std::to_string(best_err) + ", tol " + std::to_string(tol) + ")");
}

}  // namespace

DenseMatrix pseudo_inverse(const DenseMatrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0)
    throw InputError("pseudo-inverse of an empty matrix");
  if (!a.all_finite()) throw InputError("pseudo-inverse of a non-finite matrix");

  if (is_classification_matrix(a)) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      bool nonempty = false;
      for (std::size_t r = 0; r < a.rows(); ++r)
        if (a.at(r, c) == 1.0) nonempty = true;
      if (!nonempty) return iterative_pinverse(a, tol);  // empty class
    }
    return classification_pinverse(a);
  }

  // Normal equations hold when A has full column rank.
  auto ea = as_eigen(a);
  Eigen::MatrixXd ata = ea.transpose() * ea;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(ata);
  if (lu.isInvertible()) {
    EigenRowMajor g = lu.inverse() * ea.transpose();
    DenseMatrix out = from_eigen(g);
    if (check_penrose(a, out).worst() <= tol) return out;
  }
  return iterative_pinverse(a, tol);
}

DenseMatrix lift_operator(const DenseMatrix& f, const DenseMatrix& a) {
  if (f.rows() != f.cols() || f.rows() != a.rows())
    throw InputError("lift_operator dimension mismatch");
  return pseudo_inverse(a) * f * a;
}

ProbVector solve_row_system(const DenseMatrix& a, const ProbVector& b) {
  if (a.rows() != a.cols() || b.dim() != a.cols())
    throw InputError("solve_row_system dimension mismatch");
  // x a = b  <=>  a^t x^t = b^t
  Eigen::MatrixXd at = as_eigen(a).transpose();
  Eigen::VectorXd bt =
      Eigen::Map<const Eigen::VectorXd>(b.data().data(), b.dim());
  Eigen::FullPivLU<Eigen::MatrixXd> lu(at);
  if (!lu.isInvertible())
    throw SolverError("row system is singular (rank " +
                      std::to_string(lu.rank()) + " of " +
                      std::to_string(a.rows()) + ")");
  Eigen::VectorXd x = lu.solve(bt);
  std::vector<double> out(x.data(), x.data() + x.size());
  return ProbVector(std::move(out));
}

}  // namespace pdfa
