#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace gwa {

using Index = Eigen::Index;
using IndexVector = Eigen::Array<Index, Eigen::Dynamic, 1>;

template <typename Scalar>
using Point = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Finite box in R^n (n = 1 or 2) split into a uniform grid of cells.
/// Cells are stored row-major: flat = i0 * points[1] + i1.
template <typename Scalar = double>
class BoxDomain {
 public:
  using RealVector = RealArray<Scalar>;

  BoxDomain(RealVector lower, RealVector upper, IndexVector points)
      : lower_(std::move(lower)), upper_(std::move(upper)), points_(std::move(points)) {
    const Index n = lower_.size();
    if (n < 1 || n > 2)
      throw std::invalid_argument("BoxDomain: dimension must be 1 or 2");
    if (upper_.size() != n || points_.size() != n)
      throw std::invalid_argument("BoxDomain: lower, upper and points must have equal length");
    for (Index i = 0; i < n; ++i) {
      if (!std::isfinite(static_cast<double>(lower_[i])) ||
          !std::isfinite(static_cast<double>(upper_[i])))
        throw std::invalid_argument("BoxDomain: bounds must be finite");
      if (!(upper_[i] > lower_[i]))
        throw std::invalid_argument("BoxDomain: upper must exceed lower on axis " +
                                    std::to_string(i));
      if (points_[i] < 2)
        throw std::invalid_argument("BoxDomain: at least 2 points per axis required on axis " +
                                    std::to_string(i));
    }
  }

  static BoxDomain interval(Scalar lower, Scalar upper, Index points) {
    RealVector lo(1), hi(1);
    IndexVector pts(1);
    lo << lower;
    hi << upper;
    pts << points;
    return BoxDomain(lo, hi, pts);
  }

  static BoxDomain rectangle(Scalar lower0, Scalar upper0, Index points0, Scalar lower1,
                             Scalar upper1, Index points1) {
    RealVector lo(2), hi(2);
    IndexVector pts(2);
    lo << lower0, lower1;
    hi << upper0, upper1;
    pts << points0, points1;
    return BoxDomain(lo, hi, pts);
  }

  int dim() const { return static_cast<int>(lower_.size()); }
  Index size() const { return points_.prod(); }
  const RealVector& lower() const { return lower_; }
  const RealVector& upper() const { return upper_; }
  const IndexVector& points() const { return points_; }

  Scalar spacing(int axis) const {
    return (upper_[axis] - lower_[axis]) / static_cast<Scalar>(points_[axis]);
  }

  Scalar cell_volume() const {
    Scalar v = 1;
    for (int i = 0; i < dim(); ++i) v *= spacing(i);
    return v;
  }

  Scalar measure() const { return (upper_ - lower_).prod(); }

  IndexVector unravel(Index flat) const {
    IndexVector idx(dim());
    for (int axis = dim() - 1; axis >= 0; --axis) {
      idx[axis] = flat % points_[axis];
      flat /= points_[axis];
    }
    return idx;
  }

  Index ravel(const IndexVector& idx) const {
    Index flat = 0;
    for (int axis = 0; axis < dim(); ++axis) flat = flat * points_[axis] + idx[axis];
    return flat;
  }

  Scalar center_coordinate(int axis, Index i) const {
    return lower_[axis] + (static_cast<Scalar>(i) + Scalar(0.5)) * spacing(axis);
  }

  Point<Scalar> center(Index flat) const {
    const IndexVector idx = unravel(flat);
    Point<Scalar> x(dim());
    for (int axis = 0; axis < dim(); ++axis) x[axis] = center_coordinate(axis, idx[axis]);
    return x;
  }

  /// Cell whose center is nearest to x along every axis; -1 if x lies outside the box.
  Index locate(const Point<Scalar>& x) const {
    if (x.size() != dim()) throw std::invalid_argument("BoxDomain::locate: dimension mismatch");
    IndexVector idx(dim());
    for (int axis = 0; axis < dim(); ++axis) {
      if (x[axis] < lower_[axis] || x[axis] > upper_[axis]) return -1;
      const Scalar t = (x[axis] - lower_[axis]) / spacing(axis) - Scalar(0.5);
      Index i = static_cast<Index>(std::llround(static_cast<double>(t)));
      idx[axis] = std::clamp<Index>(i, 0, points_[axis] - 1);
    }
    return ravel(idx);
  }

  friend bool operator==(const BoxDomain& a, const BoxDomain& b) {
    return a.dim() == b.dim() && (a.lower_ == b.lower_).all() && (a.upper_ == b.upper_).all() &&
           (a.points_ == b.points_).all();
  }
  friend bool operator!=(const BoxDomain& a, const BoxDomain& b) { return !(a == b); }

 private:
  RealVector lower_;
  RealVector upper_;
  IndexVector points_;
};

namespace detail {

template <typename Scalar>
void require_same_domain(const BoxDomain<Scalar>& a, const BoxDomain<Scalar>& b,
                         const char* where) {
  if (a != b) throw std::invalid_argument(std::string(where) + ": domain mismatch");
}

}  // namespace detail

/// Complex cell-centered samples of a function on a BoxDomain.
template <typename Scalar = double>
class GridFunction {
 public:
  using Complex = std::complex<Scalar>;
  using Values = ComplexArray<Scalar>;

  GridFunction(BoxDomain<Scalar> domain, Values values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw std::invalid_argument("GridFunction: expected " + std::to_string(domain_.size()) +
                                  " values, got " + std::to_string(values_.size()));
    for (Index i = 0; i < values_.size(); ++i)
      if (!std::isfinite(static_cast<double>(values_[i].real())) ||
          !std::isfinite(static_cast<double>(values_[i].imag())))
        throw std::invalid_argument("GridFunction: non-finite value at cell " + std::to_string(i));
  }

  static GridFunction zero(const BoxDomain<Scalar>& domain) {
    return GridFunction(domain, Values::Zero(domain.size()));
  }

  const BoxDomain<Scalar>& domain() const { return domain_; }
  const Values& values() const { return values_; }
  Index size() const { return values_.size(); }
  Complex operator[](Index i) const { return values_[i]; }

  RealArray<Scalar> magnitudes() const { return values_.abs(); }

 private:
  BoxDomain<Scalar> domain_;
  Values values_;
};

/// Strictly positive real samples; plays the role of a, b or omega.
template <typename Scalar = double>
class Weight {
 public:
  using Values = RealArray<Scalar>;

  Weight(BoxDomain<Scalar> domain, Values values)
      : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_.size())
      throw std::invalid_argument("Weight: expected " + std::to_string(domain_.size()) +
                                  " values, got " + std::to_string(values_.size()));
    for (Index i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(static_cast<double>(values_[i])))
        throw std::invalid_argument("Weight: non-finite value at cell " + std::to_string(i));
      if (!(values_[i] > 0))
        throw std::invalid_argument("Weight: non-positive value at cell " + std::to_string(i));
    }
  }

  static Weight ones(const BoxDomain<Scalar>& domain) {
    return Weight(domain, Values::Ones(domain.size()));
  }

  const BoxDomain<Scalar>& domain() const { return domain_; }
  const Values& values() const { return values_; }
  Index size() const { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }

 private:
  BoxDomain<Scalar> domain_;
  Values values_;
};

template <typename Scalar>
struct WeightDiagnostics {
  Scalar l1_mass = 0;
  Scalar min_value = 0;
  bool is_unit_lower_bounded = false;
  Scalar submultiplicativity_defect = 0;
  /// True when every sampled x + y landed exactly on a cell center.
  bool exact_pair_sums = false;

  bool beurling() const { return is_unit_lower_bounded && submultiplicativity_defect == 0; }
};

/// Samples `sampler` at every cell center. The sampler takes a Point and
/// returns something convertible to std::complex<Scalar>.
template <typename Scalar, typename Sampler>
GridFunction<Scalar> build(const BoxDomain<Scalar>& domain, Sampler&& sampler) {
  typename GridFunction<Scalar>::Values v(domain.size());
  for (Index i = 0; i < domain.size(); ++i) {
    const std::complex<Scalar> z(sampler(domain.center(i)));
    if (!std::isfinite(static_cast<double>(z.real())) ||
        !std::isfinite(static_cast<double>(z.imag())))
      throw std::invalid_argument("build: sampler returned a non-finite value at cell " +
                                  std::to_string(i));
    v[i] = z;
  }
  return GridFunction<Scalar>(domain, std::move(v));
}

template <typename Scalar, typename Sampler>
Weight<Scalar> build_weight(const BoxDomain<Scalar>& domain, Sampler&& sampler) {
  typename Weight<Scalar>::Values v(domain.size());
  for (Index i = 0; i < domain.size(); ++i) v[i] = static_cast<Scalar>(sampler(domain.center(i)));
  return Weight<Scalar>(domain, std::move(v));
}

/// Characteristic function of the closed box [set_lower, set_upper] by
/// cell-center membership. `empty` is set when no cell center is inside.
template <typename Scalar>
GridFunction<Scalar> indicator(const BoxDomain<Scalar>& domain, const Point<Scalar>& set_lower,
                               const Point<Scalar>& set_upper, bool* empty = nullptr) {
  if (set_lower.size() != domain.dim() || set_upper.size() != domain.dim())
    throw std::invalid_argument("indicator: set bounds must match the domain dimension");
  typename GridFunction<Scalar>::Values v(domain.size());
  bool any = false;
  for (Index i = 0; i < domain.size(); ++i) {
    const Point<Scalar> c = domain.center(i);
    const bool inside = ((c.array() >= set_lower.array()) && (c.array() <= set_upper.array())).all();
    v[i] = inside ? Scalar(1) : Scalar(0);
    any = any || inside;
  }
  if (empty) *empty = !any;
  return GridFunction<Scalar>(domain, std::move(v));
}

/// (T_k f)[i] = f[i - k]; cells shifted in from outside the box are zero.
template <typename Scalar>
GridFunction<Scalar> translate(const GridFunction<Scalar>& f, const IndexVector& shift) {
  const auto& dom = f.domain();
  if (shift.size() != dom.dim())
    throw std::invalid_argument("translate: shift must match the domain dimension");
  typename GridFunction<Scalar>::Values out = GridFunction<Scalar>::Values::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    const IndexVector src = dom.unravel(i) - shift;
    if ((src >= 0).all() && (src < dom.points()).all()) out[i] = f[dom.ravel(src)];
  }
  return GridFunction<Scalar>(dom, std::move(out));
}

template <typename Scalar>
GridFunction<Scalar> modulate(const GridFunction<Scalar>& f, const Point<Scalar>& xi) {
  const auto& dom = f.domain();
  if (xi.size() != dom.dim())
    throw std::invalid_argument("modulate: frequency must match the domain dimension");
  typename GridFunction<Scalar>::Values out(f.size());
  for (Index i = 0; i < f.size(); ++i)
    out[i] = std::polar(Scalar(1), xi.dot(dom.center(i))) * f[i];
  return GridFunction<Scalar>(dom, std::move(out));
}

template <typename Scalar>
GridFunction<Scalar> scale(const GridFunction<Scalar>& f, std::complex<Scalar> lambda) {
  return GridFunction<Scalar>(f.domain(), f.values() * lambda);
}

template <typename Scalar>
GridFunction<Scalar> pointwise_abs(const GridFunction<Scalar>& f) {
  return GridFunction<Scalar>(f.domain(), f.values().abs().template cast<std::complex<Scalar>>());
}

template <typename Scalar>
GridFunction<Scalar> pointwise_product(const GridFunction<Scalar>& f, const GridFunction<Scalar>& g) {
  detail::require_same_domain(f.domain(), g.domain(), "pointwise_product");
  return GridFunction<Scalar>(f.domain(), f.values() * g.values());
}

template <typename Scalar>
GridFunction<Scalar> operator+(const GridFunction<Scalar>& f, const GridFunction<Scalar>& g) {
  detail::require_same_domain(f.domain(), g.domain(), "operator+");
  return GridFunction<Scalar>(f.domain(), f.values() + g.values());
}

template <typename Scalar>
GridFunction<Scalar> operator-(const GridFunction<Scalar>& f, const GridFunction<Scalar>& g) {
  detail::require_same_domain(f.domain(), g.domain(), "operator-");
  return GridFunction<Scalar>(f.domain(), f.values() - g.values());
}

/// f * chi of the cell block [first, last) (per axis, clipped to the grid).
template <typename Scalar>
GridFunction<Scalar> restrict_window(const GridFunction<Scalar>& f, const IndexVector& first,
                                     const IndexVector& last) {
  const auto& dom = f.domain();
  if (first.size() != dom.dim() || last.size() != dom.dim())
    throw std::invalid_argument("restrict_window: window must match the domain dimension");
  typename GridFunction<Scalar>::Values out = GridFunction<Scalar>::Values::Zero(f.size());
  for (Index i = 0; i < f.size(); ++i) {
    const IndexVector idx = dom.unravel(i);
    if ((idx >= first).all() && (idx < last).all()) out[i] = f[i];
  }
  return GridFunction<Scalar>(dom, std::move(out));
}

/// Midpoint rule: sum of samples times the cell volume.
template <typename Scalar>
std::complex<Scalar> integrate(const GridFunction<Scalar>& f) {
  return f.values().sum() * f.domain().cell_volume();
}

template <typename Scalar>
Scalar integrate(const Weight<Scalar>& w) {
  return w.values().sum() * w.domain().cell_volume();
}

template <typename Scalar>
Weight<Scalar> power(const Weight<Scalar>& w, Scalar exponent) {
  return Weight<Scalar>(w.domain(), w.values().pow(exponent));
}

/// Sampled Beurling diagnostics. Pairs of cell centers (x, y) with x + y
/// inside the box are drawn with a fixed seed. When the grid offset makes
/// the center set closed under addition (e.g. an odd cell count on a box
/// symmetric about 0) the sum is an exact center; otherwise the nearest
/// cell stands in for it and `exact_pair_sums` is false.
template <typename Scalar>
WeightDiagnostics<Scalar> weight_diagnostics(const Weight<Scalar>& w, Index pair_samples,
                                             std::uint64_t seed = 0x5eed) {
  if (pair_samples < 1) throw std::invalid_argument("weight_diagnostics: pair_samples must be >= 1");
  const auto& dom = w.domain();
  WeightDiagnostics<Scalar> d;
  d.l1_mass = integrate(w);
  d.min_value = w.values().minCoeff();
  d.is_unit_lower_bounded = (w.values() >= Scalar(1)).all();

  // c_i = (i + offset) h per axis, so c_i + c_j = c_k with k = i + j + offset.
  const int n = dom.dim();
  RealArray<Scalar> offset(n);
  bool exact = true;
  for (int a = 0; a < n; ++a) {
    offset[a] = dom.lower()[a] / dom.spacing(a) + Scalar(0.5);
    exact = exact && std::abs(offset[a] - std::round(offset[a])) < Scalar(1e-9);
  }
  d.exact_pair_sums = exact;

  std::mt19937_64 rng(seed);
  Scalar defect = 0;
  Index accepted = 0;
  const Index max_attempts = 64 * pair_samples;
  for (Index attempt = 0; attempt < max_attempts && accepted < pair_samples; ++attempt) {
    IndexVector i(n), j(n), k(n);
    bool ok = true;
    for (int a = 0; a < n && ok; ++a) {
      std::uniform_int_distribution<Index> pick(0, dom.points()[a] - 1);
      i[a] = pick(rng);
      j[a] = pick(rng);
      const Scalar target = static_cast<Scalar>(i[a] + j[a]) + offset[a];
      k[a] = static_cast<Index>(std::llround(static_cast<double>(target)));
      ok = k[a] >= 0 && k[a] < dom.points()[a];
    }
    if (!ok) continue;
    ++accepted;
    const Scalar lhs = w[dom.ravel(k)];
    const Scalar rhs = w[dom.ravel(i)] * w[dom.ravel(j)];
    defect = std::max(defect, lhs - rhs);
  }
  d.submultiplicativity_defect = std::max(defect, Scalar(0));
  return d;
}

}  // namespace gwa
