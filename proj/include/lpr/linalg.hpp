#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lpr/dual.hpp"
#include "lpr/errors.hpp"

namespace lpr {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
using VecD = Vec<double>;
using MatD = Mat<double>;

// Dense rank-3 array, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n0, int n1, int n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2), data_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  int dim0() const { return n0_; }
  int dim1() const { return n1_; }
  int dim2() const { return n2_; }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  // Slice with the first index fixed.
  MatD slice(int i) const {
    MatD m(n1_, n2_);
    for (int j = 0; j < n1_; ++j)
      for (int k = 0; k < n2_; ++k) m(j, k) = (*this)(i, j, k);
    return m;
  }
  void set_slice(int i, const MatD& m) {
    for (int j = 0; j < n1_; ++j)
      for (int k = 0; k < n2_; ++k) (*this)(i, j, k) = m(j, k);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n1_ + j) * n2_ + k;
  }
  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> data_;
};

template <class S>
Mat<S> cast_to(const MatD& m) {
  return m.template cast<S>();
}
template <class S>
Vec<S> cast_to(const VecD& v) {
  return v.template cast<S>();
}

template <class T>
MatD value_part(const Mat<Dual<T>>& m) {
  MatD out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = value_of(m(i, j));
  return out;
}

// First-order tangent of a Dual<double> matrix.
inline MatD tangent_part(const Mat<D1>& m) {
  MatD out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).d;
  return out;
}
inline VecD tangent_part(const Vec<D1>& v) {
  VecD out(v.size());
  for (int i = 0; i < v.size(); ++i) out(i) = v(i).d;
  return out;
}

// Gauss-Jordan inverse with partial pivoting on the double value. Works for
// dual scalars, where Eigen's decompositions are not instantiated.
template <class S>
Mat<S> inverse(const Mat<S>& a, const char* what = "matrix") {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw ShapeError(std::string(what) + ": inverse of non-square matrix");
  Mat<S> m = a;
  Mat<S> inv = Mat<S>::Identity(n, n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(value_of(a(i, j))));
  const double tiny = 1e-13 * std::max(scale, 1e-300);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(value_of(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double cand = std::abs(value_of(m(r, col)));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (!(best > tiny)) throw DegeneracyError(std::string(what) + " is singular");
    if (piv != col) {
      m.row(piv).swap(m.row(col));
      inv.row(piv).swap(inv.row(col));
    }
    S p = S(1.0) / m(col, col);
    m.row(col) *= p;
    inv.row(col) *= p;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = m(r, col);
      if (value_of(f) == 0.0 && !is_dual<S>::value) continue;
      m.row(r) -= f * m.row(col);
      inv.row(r) -= f * inv.row(col);
    }
  }
  return inv;
}

// Smallest eigenvalue of a symmetric matrix (double only).
double min_eigenvalue(const MatD& sym);
// Smallest singular value.
double min_singular_value(const MatD& m);

// max_ij |a - b| / max(1, max|a|).
double scaled_diff(const MatD& a, const MatD& b);
double scaled_diff(const Tensor3& a, const Tensor3& b);
double max_abs(const MatD& m);

}  // namespace lpr
