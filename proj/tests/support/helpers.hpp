#pragma once

#include <doctest.h>

#include <Eigen/Dense>

#include "lpr/linalg.hpp"

namespace lpr::testing {

inline double max_abs_diff(const MatD& a, const MatD& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

inline MatD mat(int r, int c, std::initializer_list<double> v) {
  MatD m(r, c);
  auto it = v.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

inline VecD vec(std::initializer_list<double> v) {
  VecD out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace lpr::testing
