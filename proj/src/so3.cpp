#include "nlg/so3.hpp"

#include <stdexcept>

namespace nlg::so3 {

SmoothMap random_rotation_field(std::size_t dim, std::uint64_t seed, double amplitude) {
  TrigSpec spec;
  spec.terms = 3;
  spec.amplitude = amplitude;
  spec.frequency = 1.3;
  const SmoothMap angles = random_trig_map(dim, 3, seed, spec);
  return SmoothMap(dim, 9, [angles](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    T ang[3];
    angles.eval<T>(x, std::span<T>(ang, 3));
    const Mat3<T> r = mul(mul(rot_z(ang[0]), rot_y(ang[1])), rot_x(ang[2]));
    for (int i = 0; i < 9; ++i) y[i] = r[i];
  });
}

SmoothMap exp_field(const SmoothMap& xi, double scale) {
  if (xi.codim() != 3) throw std::invalid_argument("exp_field expects an R^3-valued map");
  return SmoothMap(xi.dim(), 9, [xi, scale](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    T w[3];
    xi.eval<T>(x, std::span<T>(w, 3));
    const Mat3<T> r = so3::exp<T>(scale * w[0], scale * w[1], scale * w[2]);
    for (int i = 0; i < 9; ++i) y[i] = r[i];
  });
}

Matrix exp_matrix(const std::array<double, 3>& w) {
  const Mat3<double> r = so3::exp<double>(w[0], w[1], w[2]);
  Matrix m(3, 3);
  for (int i = 0; i < 9; ++i) m.data[i] = r[i];
  return m;
}

}  // namespace nlg::so3
