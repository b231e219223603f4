#pragma once

#include <cmath>
#include <ostream>

namespace pan::nn {

/// Hyper-dual number  a + b e1 + c e2 + d e1 e2  with e1^2 = e2^2 = 0.
///
/// Seeding a coordinate with e1 = e2 = 1 gives, after evaluation of f,
/// first derivative in `e1` and pure second derivative in `e12`.
template <class T>
struct HyperDual {
  T re{};
  T e1{};
  T e2{};
  T e12{};

  constexpr HyperDual() = default;
  constexpr HyperDual(T value) : re(value) {}  // NOLINT(google-explicit-constructor)
  constexpr HyperDual(T value, T d1, T d2, T d12) : re(value), e1(d1), e2(d2), e12(d12) {}

  static constexpr HyperDual variable(T value) { return {value, T(1), T(1), T(0)}; }

  HyperDual& operator+=(const HyperDual& o) {
    re += o.re;
    e1 += o.e1;
    e2 += o.e2;
    e12 += o.e12;
    return *this;
  }
  HyperDual& operator-=(const HyperDual& o) {
    re -= o.re;
    e1 -= o.e1;
    e2 -= o.e2;
    e12 -= o.e12;
    return *this;
  }
  HyperDual& operator*=(const HyperDual& o) { return *this = *this * o; }

  friend HyperDual operator+(HyperDual a, const HyperDual& b) { return a += b; }
  friend HyperDual operator-(HyperDual a, const HyperDual& b) { return a -= b; }
  friend HyperDual operator-(const HyperDual& a) { return {-a.re, -a.e1, -a.e2, -a.e12}; }

  friend HyperDual operator*(const HyperDual& a, const HyperDual& b) {
    return {a.re * b.re, a.re * b.e1 + a.e1 * b.re, a.re * b.e2 + a.e2 * b.re,
            a.re * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.re};
  }
  friend HyperDual operator*(const HyperDual& a, T s) { return {a.re * s, a.e1 * s, a.e2 * s, a.e12 * s}; }
  friend HyperDual operator*(T s, const HyperDual& a) { return a * s; }

  friend std::ostream& operator<<(std::ostream& os, const HyperDual& h) {
    return os << '(' << h.re << ", " << h.e1 << ", " << h.e2 << ", " << h.e12 << ')';
  }
};

/// Lift a scalar function with known f, f', f'' to hyper-dual arguments.
template <class T>
HyperDual<T> chain(const HyperDual<T>& x, T f, T df, T d2f) {
  return {f, df * x.e1, df * x.e2, df * x.e12 + d2f * x.e1 * x.e2};
}

template <class T>
HyperDual<T> tanh(const HyperDual<T>& x) {
  using std::tanh;
  const T t = tanh(x.re);
  const T s = T(1) - t * t;
  return chain(x, t, s, T(-2) * t * s);
}

template <class T>
HyperDual<T> sin(const HyperDual<T>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.re);
  return chain(x, s, cos(x.re), -s);
}

}  // namespace pan::nn
