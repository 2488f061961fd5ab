#pragma once

// Independent reference computations for the tests: finite differences
// written from scratch, Eigen matrix exponentials and brute-force table
// arithmetic. None of these call the library code they are used to check.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "nlg/groupoid.hpp"
#include "nlg/smooth.hpp"

namespace oracle {

using nlg::Point;

/// Fourth-order central difference of every output of m along coordinate k.
inline std::vector<double> partial(const nlg::SmoothMap& m, Point x, std::size_t k, double h = 1e-3) {
  auto at = [&](double off) {
    Point y = x;
    y[k] += off;
    return m(y);
  };
  const auto p2 = at(2 * h), p1 = at(h), m1 = at(-h), m2 = at(-2 * h);
  std::vector<double> d(p1.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (-p2[i] + 8 * p1[i] - 8 * m1[i] + m2[i]) / (12 * h);
  return d;
}

inline Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  return m;
}

inline Eigen::Matrix3d expm(const Eigen::Vector3d& w) { return hat(w).exp(); }

inline Eigen::Matrix3d to_eigen(const std::vector<double>& rowmajor) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rowmajor[i * 3 + j];
  return m;
}

/// Field strength from finite differences of theta and the structure map.
inline std::vector<double> field_strength(const nlg::SmoothMap& theta, const nlg::SmoothMap& f,
                                          const nlg::SmoothMap& C, std::size_t r, const Point& u) {
  const std::size_t m = u.size();
  std::vector<std::vector<double>> d(m);
  for (std::size_t mu = 0; mu < m; ++mu) d[mu] = partial(theta, u, mu);
  const auto th = theta(u);
  const auto c = C(f(u));
  std::vector<double> F(r * m * m, 0.0);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t mu = 0; mu < m; ++mu)
      for (std::size_t nu = 0; nu < m; ++nu) {
        double v = d[mu][a * m + nu] - d[nu][a * m + mu];
        for (std::size_t b = 0; b < r; ++b)
          for (std::size_t e = 0; e < r; ++e) v += c[(a * r + b) * r + e] * th[b * m + mu] * th[e * m + nu];
        F[(a * m + mu) * m + nu] = v;
      }
  return F;
}

/// J^ijk by the cyclic sum with finite-difference derivatives of pi.
inline std::vector<double> jacobiator(const nlg::SmoothMap& pi, const Point& x) {
  const std::size_t n = x.size();
  const auto p = pi(x);
  std::vector<std::vector<double>> dp(n);
  for (std::size_t l = 0; l < n; ++l) dp[l] = partial(pi, x, l);
  std::vector<double> J(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        for (std::size_t l = 0; l < n; ++l)
          v += p[l * n + k] * dp[l][i * n + j] + p[l * n + i] * dp[l][j * n + k] + p[l * n + j] * dp[l][k * n + i];
        J[(i * n + j) * n + k] = v;
      }
  return J;
}

/// Composable triples (g, h, k) with (gh)k != g(hk), by direct table lookups.
inline std::set<std::array<int, 3>> non_associative(const nlg::fin::FiniteGroupoid& G) {
  std::set<std::array<int, 3>> out;
  const int na = static_cast<int>(G.arrows.size());
  auto mul = [&](int a, int b) { return G.comp[static_cast<std::size_t>(a) * na + b]; };
  for (int g = 0; g < na; ++g)
    for (int h = 0; h < na; ++h) {
      if (G.t[g] != G.s[h]) continue;
      for (int k = 0; k < na; ++k) {
        if (G.t[h] != G.s[k]) continue;
        const int gh = mul(g, h), hk = mul(h, k);
        const int left = gh < 0 ? -2 : mul(gh, k);
        const int right = hk < 0 ? -3 : mul(g, hk);
        if (left != right) out.insert({g, h, k});
      }
    }
  return out;
}

}  // namespace oracle
