#pragma once

// Charts and smooth maps on them. A SmoothMap is a type-erased evaluator
// that can run at double and at every dual-number level of the tower, so
// derivatives of derived quantities (brackets, pullbacks, flows) stay exact
// to roundoff.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlg/dual.hpp"

namespace nlg {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

class Chart {
 public:
  Chart() = default;
  Chart(std::vector<std::string> labels, std::vector<Interval> box);

  /// Chart with labels prefix1..prefixN on the cube [lo, hi]^N.
  static Chart cube(std::size_t dim, const std::string& prefix, double lo, double hi);

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Interval>& box() const { return box_; }
  bool contains(std::span<const double> x) const;
  /// Index of a label, or -1.
  int index_of(const std::string& label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<Interval> box_;
};

using Point = std::vector<double>;

class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, Point at)
      : std::runtime_error(what), point_(std::move(at)) {}
  const Point& point() const { return point_; }

 private:
  Point point_;
};

/// Thrown when a derivative is requested beyond the depth of the dual tower.
class DerivativeDepthError : public std::logic_error {
 public:
  DerivativeDepthError() : std::logic_error("derivative order exceeds the dual-number tower") {}
};

[[noreturn]] inline void throw_depth() { throw DerivativeDepthError(); }

class SmoothMap {
 public:
  SmoothMap() = default;

  /// `body` is a generic callable `body(std::span<const T> x, std::span<T> y)`
  /// instantiable for every tower scalar T.
  template <class F>
  SmoothMap(std::size_t dim, std::size_t codim, F body)
      : dim_(dim), codim_(codim), impl_(std::make_shared<Impl<F>>(std::move(body))) {}

  std::size_t dim() const { return dim_; }
  std::size_t codim() const { return codim_; }
  bool empty() const { return impl_ == nullptr; }

  template <class T>
  void eval(std::span<const T> x, std::span<T> y) const {
    static_assert(is_tower_scalar_v<T>, "unsupported scalar type");
    impl_->run(x, y);
  }

  template <class T>
  std::vector<T> eval(std::span<const T> x) const {
    std::vector<T> y(codim_);
    eval<T>(x, std::span<T>(y));
    return y;
  }

  /// Real evaluation with a finiteness check.
  Point operator()(std::span<const double> x) const;
  Point operator()(const Point& x) const { return (*this)(std::span<const double>(x)); }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual void run(std::span<const double>, std::span<double>) const = 0;
    virtual void run(std::span<const D1>, std::span<D1>) const = 0;
    virtual void run(std::span<const D2>, std::span<D2>) const = 0;
    virtual void run(std::span<const D3>, std::span<D3>) const = 0;
  };
  template <class F>
  struct Impl final : Concept {
    explicit Impl(F f) : body(std::move(f)) {}
    void run(std::span<const double> x, std::span<double> y) const override { body(x, y); }
    void run(std::span<const D1> x, std::span<D1> y) const override { body(x, y); }
    void run(std::span<const D2> x, std::span<D2> y) const override { body(x, y); }
    void run(std::span<const D3> x, std::span<D3> y) const override { body(x, y); }
    F body;
  };

  std::size_t dim_ = 0;
  std::size_t codim_ = 0;
  std::shared_ptr<const Concept> impl_;
};

/// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Value and Jacobian (row-major codim x dim) of `m` at x, computed at scalar
/// level T with one dual pass per input coordinate.
template <class T>
void value_and_jacobian(const SmoothMap& m, std::span<const T> x, std::span<T> value,
                        std::span<T> jac) {
  static_assert(liftable_v<T>);
  const std::size_t n = m.dim();
  const std::size_t k = m.codim();
  std::vector<Dual<T>> xd(n);
  std::vector<Dual<T>> yd(k);
  for (std::size_t mu = 0; mu < n; ++mu) {
    for (std::size_t i = 0; i < n; ++i) xd[i] = Dual<T>(x[i], T(i == mu ? 1.0 : 0.0));
    m.eval<Dual<T>>(xd, yd);
    for (std::size_t i = 0; i < k; ++i) jac[i * n + mu] = yd[i].d;
    if (mu == 0 && !value.empty())
      for (std::size_t i = 0; i < k; ++i) value[i] = yd[i].v;
  }
  if (n == 0 && !value.empty()) m.eval<T>(x, value);
}

/// Exact (dual-number) Jacobian at a real point.
Matrix jacobian(const SmoothMap& m, std::span<const double> x);
/// Central-difference Jacobian (f(x+he) - f(x-he)) / 2h.
Matrix fd_jacobian(const SmoothMap& m, std::span<const double> x, double h);

/// n points uniform in the chart box; deterministic for a fixed seed and
/// independent of the standard library's distribution implementations.
std::vector<Point> sample_points(const Chart& chart, std::size_t n, std::uint64_t seed);

/// Portable seeded generator (splitmix64) for reproducible model data.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

// Basic map constructors.

SmoothMap identity_map(std::size_t dim);
SmoothMap constant_map(std::size_t dim, std::vector<double> value);
/// x -> A x with A row-major (codim x dim).
SmoothMap linear_map(const Matrix& a);
/// outer(inner(x)).
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);
/// Concatenates outputs of maps sharing a domain.
SmoothMap stack(const std::vector<SmoothMap>& parts);
/// Pointwise linear combination sum_k w_k m_k of maps of equal shape.
SmoothMap linear_combination(const std::vector<std::pair<double, SmoothMap>>& terms);
/// Pointwise product of a scalar map (codim 1) and a map.
SmoothMap scale_by(const SmoothMap& scalar, const SmoothMap& m);

/// Random trigonometric polynomial y_i = c_i + sum_k A_ik sin(w_k . x + phi_k)
/// with |A_ik| <= amplitude / terms and |w_k| <= frequency per component.
struct TrigSpec {
  std::size_t terms = 3;
  double amplitude = 0.5;
  double frequency = 1.5;
  std::vector<double> offset;  // defaults to zero
};
SmoothMap random_trig_map(std::size_t dim, std::size_t codim, std::uint64_t seed,
                          const TrigSpec& spec = {});

}  // namespace nlg
