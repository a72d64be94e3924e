#pragma once

// Forward-mode dual numbers. A single tangent direction per level; second
// derivatives come from nesting (Dual<Dual<double>>).

#include <cmath>
#include <limits>
#include <type_traits>

#include <Eigen/Core>

namespace lpr {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), d(0.0) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(const T& value, const T& tangent) : v(value), d(tangent) {}
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  constexpr Dual(const T& value) : v(value), d(0.0) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    *this = *this / o;
    return *this;
  }
  Dual operator-() const { return {-v, -d}; }
  Dual operator+() const { return *this; }

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.d - b.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    T inv = T(1.0) / b.v;
    T q = a.v * inv;
    return {q, (a.d - q * b.d) * inv};
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

#define LPR_DUAL_CMP(op)                                                             \
  template <class T>                                                                 \
  bool operator op(const Dual<T>& a, const Dual<T>& b) { return value_of(a) op value_of(b); } \
  template <class T>                                                                 \
  bool operator op(const Dual<T>& a, double b) { return value_of(a) op b; }          \
  template <class T>                                                                 \
  bool operator op(double a, const Dual<T>& b) { return a op value_of(b); }
LPR_DUAL_CMP(<)
LPR_DUAL_CMP(>)
LPR_DUAL_CMP(<=)
LPR_DUAL_CMP(>=)
#undef LPR_DUAL_CMP

template <class T>
bool operator==(const Dual<T>& a, const Dual<T>& b) {
  return a.v == b.v && a.d == b.d;
}
template <class T>
bool operator!=(const Dual<T>& a, const Dual<T>& b) {
  return !(a == b);
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), cos(a.v) * a.d};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -sin(a.v) * a.d};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}
template <class T>
Dual<T> abs(const Dual<T>& a) {
  return a.v < 0.0 ? -a : a;
}
template <class T>
Dual<T> abs2(const Dual<T>& a) {
  return a * a;
}

// Seeds a dual number with unit tangent.
template <class T>
Dual<T> seed(const T& value, double tangent = 1.0) {
  return {value, T(tangent)};
}

}  // namespace lpr

namespace Eigen {

template <class T>
struct NumTraits<lpr::Dual<T>> : GenericNumTraits<lpr::Dual<T>> {
  using Real = lpr::Dual<T>;
  using NonInteger = lpr::Dual<T>;
  using Nested = lpr::Dual<T>;
  using Literal = lpr::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static Real dummy_precision() { return Real(1e-12); }
  static Real highest() { return Real(std::numeric_limits<double>::max()); }
  static Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static int digits10() { return std::numeric_limits<double>::digits10; }
};

template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<lpr::Dual<T>, double, BinaryOp> {
  using ReturnType = lpr::Dual<T>;
};
template <class T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, lpr::Dual<T>, BinaryOp> {
  using ReturnType = lpr::Dual<T>;
};

}  // namespace Eigen
