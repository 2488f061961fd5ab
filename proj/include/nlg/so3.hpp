#pragma once

// 3x3 rotation helpers templated on the scalar type, so rotation-valued
// fields can be differentiated with dual numbers.

#include <array>
#include <cmath>
#include <cstdint>

#include "nlg/dual.hpp"
#include "nlg/smooth.hpp"

namespace nlg::so3 {

template <class T>
using Mat3 = std::array<T, 9>;  // row-major

template <class T>
Mat3<T> identity() {
  Mat3<T> m;
  for (auto& v : m) v = T(0.0);
  m[0] = m[4] = m[8] = T(1.0);
  return m;
}

template <class T>
Mat3<T> mul(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T acc = a[i * 3] * b[j];
      acc += a[i * 3 + 1] * b[3 + j];
      acc += a[i * 3 + 2] * b[6 + j];
      c[i * 3 + j] = acc;
    }
  return c;
}

template <class T>
Mat3<T> transpose(const Mat3<T>& a) {
  Mat3<T> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i * 3 + j] = a[j * 3 + i];
  return t;
}

/// hat(w) x = w cross x.
template <class T>
Mat3<T> hat(const T& w1, const T& w2, const T& w3) {
  Mat3<T> m;
  m[0] = T(0.0);
  m[1] = -w3;
  m[2] = w2;
  m[3] = w3;
  m[4] = T(0.0);
  m[5] = -w1;
  m[6] = -w2;
  m[7] = w1;
  m[8] = T(0.0);
  return m;
}

/// exp(hat(w)) by Rodrigues' formula, with Taylor coefficients near w = 0 so
/// the map stays smooth (and dual-differentiable) through the origin.
template <class T>
Mat3<T> exp(const T& w1, const T& w2, const T& w3) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T s = w1 * w1 + w2 * w2 + w3 * w3;
  T a, b;  // sin(t)/t and (1 - cos t)/t^2 with t^2 = s
  if (value_of(s) < 1e-6) {
    a = 1.0 - s / 6.0 + s * s / 120.0 - s * s * s / 5040.0;
    b = 0.5 - s / 24.0 + s * s / 720.0 - s * s * s / 40320.0;
  } else {
    const T t = sqrt(s);
    a = sin(t) / t;
    b = (1.0 - cos(t)) / s;
  }
  const Mat3<T> k = hat(w1, w2, w3);
  const Mat3<T> k2 = mul(k, k);
  Mat3<T> r = identity<T>();
  for (int i = 0; i < 9; ++i) r[i] = r[i] + a * k[i] + b * k2[i];
  return r;
}

template <class T>
Mat3<T> rot_x(const T& t) {
  using std::cos;
  using std::sin;
  Mat3<T> m = identity<T>();
  m[4] = cos(t);
  m[5] = -sin(t);
  m[7] = sin(t);
  m[8] = cos(t);
  return m;
}
template <class T>
Mat3<T> rot_y(const T& t) {
  using std::cos;
  using std::sin;
  Mat3<T> m = identity<T>();
  m[0] = cos(t);
  m[2] = sin(t);
  m[6] = -sin(t);
  m[8] = cos(t);
  return m;
}
template <class T>
Mat3<T> rot_z(const T& t) {
  using std::cos;
  using std::sin;
  Mat3<T> m = identity<T>();
  m[0] = cos(t);
  m[1] = -sin(t);
  m[3] = sin(t);
  m[4] = cos(t);
  return m;
}

/// Smooth rotation field u -> Rz(alpha(u)) Ry(beta(u)) Rx(gamma(u)) with
/// random trigonometric angle functions; values flattened row-major.
SmoothMap random_rotation_field(std::size_t dim, std::uint64_t seed, double amplitude = 1.2);

/// u -> exp(scale * hat(xi(u))) for xi: M -> R^3.
SmoothMap exp_field(const SmoothMap& xi, double scale = 1.0);

/// Real rotation exp(hat(w)).
Matrix exp_matrix(const std::array<double, 3>& w);

}  // namespace nlg::so3
