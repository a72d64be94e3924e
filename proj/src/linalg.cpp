#include "lpr/linalg.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lpr {

double min_eigenvalue(const MatD& sym) {
  if (sym.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatD> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double min_singular_value(const MatD& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatD> svd(m);
  return svd.singularValues().minCoeff();
}

double max_abs(const MatD& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double scaled_diff(const MatD& a, const MatD& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("scaled_diff: extent mismatch");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, max_abs(a));
}

double scaled_diff(const Tensor3& a, const Tensor3& b) {
  if (a.dim0() != b.dim0() || a.dim1() != b.dim1() || a.dim2() != b.dim2())
    throw ShapeError("scaled_diff: extent mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m / std::max(1.0, a.max_abs());
}

}  // namespace lpr
