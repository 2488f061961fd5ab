#include "nlg/smooth.hpp"

#include <cmath>
#include <sstream>

namespace nlg {

Chart::Chart(std::vector<std::string> labels, std::vector<Interval> box)
    : labels_(std::move(labels)), box_(std::move(box)) {
  if (labels_.empty()) throw std::invalid_argument("chart must have positive dimension");
  if (labels_.size() != box_.size())
    throw std::invalid_argument("chart labels and box have different lengths");
  for (const auto& iv : box_)
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("chart interval is empty");
}

Chart Chart::cube(std::size_t dim, const std::string& prefix, double lo, double hi) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < dim; ++i) labels.push_back(prefix + std::to_string(i + 1));
  return Chart(std::move(labels), std::vector<Interval>(dim, Interval{lo, hi}));
}

bool Chart::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!box_[i].contains(x[i])) return false;
  return true;
}

int Chart::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<int>(i);
  return -1;
}

Point SmoothMap::operator()(std::span<const double> x) const {
  if (x.size() != dim_) throw std::invalid_argument("point dimension does not match map domain");
  Point y(codim_);
  impl_->run(x, std::span<double>(y));
  for (double v : y) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite map value at (";
      for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
      os << ")";
      throw EvaluationError(os.str(), Point(x.begin(), x.end()));
    }
  }
  return y;
}

Matrix jacobian(const SmoothMap& m, std::span<const double> x) {
  if (x.size() != m.dim()) throw std::invalid_argument("point dimension does not match map domain");
  Matrix j(m.codim(), m.dim());
  std::vector<double> value(m.codim());
  value_and_jacobian<double>(m, x, value, j.data);
  return j;
}

Matrix fd_jacobian(const SmoothMap& m, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("fd step must be positive");
  Matrix j(m.codim(), m.dim());
  Point xp(x.begin(), x.end());
  Point xm(x.begin(), x.end());
  for (std::size_t mu = 0; mu < m.dim(); ++mu) {
    xp[mu] = x[mu] + h;
    xm[mu] = x[mu] - h;
    Point fp = m(xp);
    Point fm = m(xm);
    for (std::size_t i = 0; i < m.codim(); ++i) j(i, mu) = (fp[i] - fm[i]) / (2.0 * h);
    xp[mu] = x[mu];
    xm[mu] = x[mu];
  }
  return j;
}

std::uint64_t SeededRng::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SeededRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> sample_points(const Chart& chart, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_points needs n >= 1");
  SeededRng rng(seed);
  std::vector<Point> pts(n, Point(chart.dim()));
  for (auto& p : pts)
    for (std::size_t i = 0; i < chart.dim(); ++i)
      p[i] = rng.uniform(chart.box()[i].lo, chart.box()[i].hi);
  return pts;
}

SmoothMap identity_map(std::size_t dim) {
  return SmoothMap(dim, dim, [](auto x, auto y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
  });
}

SmoothMap constant_map(std::size_t dim, std::vector<double> value) {
  const std::size_t k = value.size();
  return SmoothMap(dim, k, [value = std::move(value)](auto, auto y) {
    for (std::size_t i = 0; i < value.size(); ++i) y[i] = value[i];
  });
}

SmoothMap linear_map(const Matrix& a) {
  return SmoothMap(a.cols, a.rows, [a](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    for (std::size_t i = 0; i < a.rows; ++i) {
      T acc(0.0);
      for (std::size_t j = 0; j < a.cols; ++j) acc += a(i, j) * x[j];
      y[i] = acc;
    }
  });
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (outer.dim() != inner.codim()) throw std::invalid_argument("compose: dimension mismatch");
  return SmoothMap(inner.dim(), outer.codim(), [outer, inner](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> mid(inner.codim());
    inner.eval<T>(x, std::span<T>(mid));
    outer.eval<T>(std::span<const T>(mid), y);
  });
}

SmoothMap stack(const std::vector<SmoothMap>& parts) {
  if (parts.empty()) throw std::invalid_argument("stack: no parts");
  std::size_t codim = 0;
  for (const auto& p : parts) {
    if (p.dim() != parts.front().dim()) throw std::invalid_argument("stack: domain mismatch");
    codim += p.codim();
  }
  return SmoothMap(parts.front().dim(), codim, [parts](auto x, auto y) {
    std::size_t off = 0;
    for (const auto& p : parts) {
      p.eval(x, y.subspan(off, p.codim()));
      off += p.codim();
    }
  });
}

SmoothMap linear_combination(const std::vector<std::pair<double, SmoothMap>>& terms) {
  if (terms.empty()) throw std::invalid_argument("linear_combination: no terms");
  const auto& first = terms.front().second;
  for (const auto& [w, m] : terms)
    if (m.dim() != first.dim() || m.codim() != first.codim())
      throw std::invalid_argument("linear_combination: shape mismatch");
  return SmoothMap(first.dim(), first.codim(), [terms](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    std::vector<T> tmp(y.size());
    for (auto& v : y) v = T(0.0);
    for (const auto& [w, m] : terms) {
      m.template eval<T>(x, std::span<T>(tmp));
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += w * tmp[i];
    }
  });
}

SmoothMap scale_by(const SmoothMap& scalar, const SmoothMap& m) {
  if (scalar.codim() != 1 || scalar.dim() != m.dim())
    throw std::invalid_argument("scale_by: shape mismatch");
  return SmoothMap(m.dim(), m.codim(), [scalar, m](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    T s[1];
    scalar.eval<T>(x, std::span<T>(s, 1));
    m.eval<T>(x, y);
    for (auto& v : y) v = v * s[0];
  });
}

SmoothMap random_trig_map(std::size_t dim, std::size_t codim, std::uint64_t seed,
                          const TrigSpec& spec) {
  SeededRng rng(seed);
  const std::size_t terms = spec.terms;
  std::vector<double> freq(terms * dim), phase(terms), amp(codim * terms), offset(codim, 0.0);
  for (auto& w : freq) w = rng.uniform(-spec.frequency, spec.frequency);
  for (auto& p : phase) p = rng.uniform(0.0, 6.283185307179586);
  const double a = terms ? spec.amplitude / static_cast<double>(terms) : 0.0;
  for (auto& v : amp) v = rng.uniform(-a, a);
  for (std::size_t i = 0; i < codim && i < spec.offset.size(); ++i) offset[i] = spec.offset[i];
  return SmoothMap(dim, codim, [=](auto x, auto y) {
    using T = typename decltype(y)::value_type;
    using std::sin;
    std::vector<T> waves(terms);
    for (std::size_t k = 0; k < terms; ++k) {
      T arg(phase[k]);
      for (std::size_t j = 0; j < dim; ++j) arg += freq[k * dim + j] * x[j];
      waves[k] = sin(arg);
    }
    for (std::size_t i = 0; i < codim; ++i) {
      T acc(offset[i]);
      for (std::size_t k = 0; k < terms; ++k) acc += amp[i * terms + k] * waves[k];
      y[i] = acc;
    }
  });
}

}  // namespace nlg
