#pragma once

#include "gwa/grid.hpp"
#include "gwa/norms.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gwa {

enum class SpaceKind { Classical, Grand };

inline const char* to_string(SpaceKind k) { return k == SpaceKind::Classical ? "CLASSICAL" : "GRAND"; }

/// L^p(omega).
template <typename Scalar = double>
struct ClassicalSpace {
  Scalar p;
  Weight<Scalar> weight;
};

/// Local or global component of an amalgam: weighted L^p or a grand space.
template <typename Scalar = double>
class SpaceDescriptor {
 public:
  static SpaceDescriptor classical(Scalar p, Weight<Scalar> weight) {
    if (!(p >= 1)) throw std::invalid_argument("SpaceDescriptor: classical exponent must be >= 1");
    return SpaceDescriptor(ClassicalSpace<Scalar>{p, std::move(weight)});
  }

  static SpaceDescriptor grand(GrandParams<Scalar> gp) { return SpaceDescriptor(std::move(gp)); }

  SpaceKind kind() const {
    return std::holds_alternative<ClassicalSpace<Scalar>>(space_) ? SpaceKind::Classical : SpaceKind::Grand;
  }

  const ClassicalSpace<Scalar>& classical_space() const { return std::get<ClassicalSpace<Scalar>>(space_); }
  const GrandParams<Scalar>& grand_params() const { return std::get<GrandParams<Scalar>>(space_); }

  Scalar exponent() const {
    return kind() == SpaceKind::Classical ? classical_space().p : grand_params().p;
  }

  /// omega for classical spaces, the grandizer for grand ones.
  const Weight<Scalar>& weight() const {
    return kind() == SpaceKind::Classical ? classical_space().weight : grand_params().grandizer;
  }

  SpaceDescriptor with_weight(Weight<Scalar> w) const {
    if (kind() == SpaceKind::Classical) return classical(classical_space().p, std::move(w));
    return grand(grand_params().with_grandizer(std::move(w)));
  }

 private:
  explicit SpaceDescriptor(ClassicalSpace<Scalar> s) : space_(std::move(s)) {}
  explicit SpaceDescriptor(GrandParams<Scalar> g) : space_(std::move(g)) {}

  std::variant<ClassicalSpace<Scalar>, GrandParams<Scalar>> space_;
};

enum class ClipMode { ZeroFill };

/// Window Q (side_cells per axis) and the anchor lattice spacing.
/// Anchors sit at multiples of stride_cells inside the box; the window of
/// anchor k covers cells [k*stride, k*stride + side), clipped at the box.
struct WindowSpec {
  IndexVector side_cells;
  IndexVector stride_cells;
  ClipMode clip_mode = ClipMode::ZeroFill;

  static WindowSpec uniform(int dim, Index side, Index stride) {
    WindowSpec w;
    w.side_cells = IndexVector::Constant(dim, side);
    w.stride_cells = IndexVector::Constant(dim, stride);
    return w;
  }

  template <typename Scalar>
  void validate(const BoxDomain<Scalar>& domain) const {
    if (side_cells.size() != domain.dim() || stride_cells.size() != domain.dim())
      throw std::invalid_argument("WindowSpec: side and stride must match the domain dimension");
    if ((side_cells < 1).any()) throw std::invalid_argument("WindowSpec: side_cells must be >= 1");
    if ((stride_cells < 1).any()) throw std::invalid_argument("WindowSpec: stride_cells must be >= 1");
    if ((side_cells > domain.points()).any())
      throw std::invalid_argument("WindowSpec: window larger than the grid");
    if ((stride_cells > domain.points()).any())
      throw std::invalid_argument("WindowSpec: stride larger than the grid");
  }

  /// Every cell lies in at least one window.
  bool covers() const { return (stride_cells <= side_cells).all(); }
};

template <typename Scalar = double>
struct AmalgamSpec {
  SpaceDescriptor<Scalar> local;
  SpaceDescriptor<Scalar> global;
  WindowSpec window;

  void validate(const BoxDomain<Scalar>& domain) const {
    window.validate(domain);
    if (local.weight().domain() != domain || global.weight().domain() != domain)
      throw std::invalid_argument("AmalgamSpec: local and global weights must live on the function's domain");
  }
};

/// Control function sampled on the anchor lattice. Each anchor stands for
/// a lattice cell of measure prod(stride * h).
template <typename Scalar = double>
struct ControlFunction {
  BoxDomain<Scalar> source;
  WindowSpec window;
  IndexVector anchors_per_axis;
  RealArray<Scalar> values;

  Index size() const { return values.size(); }

  Scalar anchor_volume() const {
    Scalar v = 1;
    for (int a = 0; a < source.dim(); ++a)
      v *= static_cast<Scalar>(window.stride_cells[a]) * source.spacing(a);
    return v;
  }

  IndexVector anchor_index(Index flat) const {
    IndexVector k(anchors_per_axis.size());
    for (Index axis = anchors_per_axis.size() - 1; axis >= 0; --axis) {
      k[axis] = flat % anchors_per_axis[axis];
      flat /= anchors_per_axis[axis];
    }
    return k;
  }

  /// First cell of the anchor's window.
  IndexVector first_cell(Index flat) const { return anchor_index(flat) * window.stride_cells; }

  /// Corner x of the translated window Q + x.
  Point<Scalar> anchor_point(Index flat) const {
    const IndexVector c = first_cell(flat);
    Point<Scalar> x(source.dim());
    for (int a = 0; a < source.dim(); ++a)
      x[a] = source.lower()[a] + static_cast<Scalar>(c[a]) * source.spacing(a);
    return x;
  }
};

namespace detail {

inline IndexVector anchor_counts(const IndexVector& points, const IndexVector& stride) {
  return (points + stride - 1) / stride;
}

/// Copies the samples of the (clipped) block [first, first + side) into a compact array.
template <typename Scalar>
RealArray<Scalar> gather_window(const RealArray<Scalar>& src, const BoxDomain<Scalar>& dom,
                                const IndexVector& first, const IndexVector& side) {
  const IndexVector last = (first + side).min(dom.points());
  const IndexVector extent = last - first;
  if (dom.dim() == 1) return src.segment(first[0], extent[0]);
  RealArray<Scalar> out(extent.prod());
  Index k = 0;
  for (Index i = first[0]; i < last[0]; ++i) {
    const Index row = i * dom.points()[1];
    out.segment(k, extent[1]) = src.segment(row + first[1], extent[1]);
    k += extent[1];
  }
  return out;
}

/// Weight values at the anchor lattice: the cell nearest the middle of each lattice cell.
template <typename Scalar>
RealArray<Scalar> anchor_weights(const Weight<Scalar>& w, const ControlFunction<Scalar>& cf) {
  const auto& dom = w.domain();
  RealArray<Scalar> out(cf.size());
  for (Index k = 0; k < cf.size(); ++k) {
    IndexVector cell = cf.first_cell(k) + cf.window.stride_cells / 2;
    cell = cell.min(dom.points() - 1);
    out[k] = w[dom.ravel(cell)];
  }
  return out;
}

template <typename Scalar>
ControlFunction<Scalar> empty_control(const BoxDomain<Scalar>& dom, const WindowSpec& window) {
  const IndexVector counts = anchor_counts(dom.points(), window.stride_cells);
  return ControlFunction<Scalar>{dom, window, counts, RealArray<Scalar>::Zero(counts.prod())};
}

/// Per-anchor local norm via `local_norm(window_mag, window_weight)`.
template <typename Scalar, typename LocalNorm>
ControlFunction<Scalar> control_values(const GridFunction<Scalar>& f, const Weight<Scalar>& local_weight,
                                       const WindowSpec& window, LocalNorm&& local_norm) {
  const auto& dom = f.domain();
  window.validate(dom);
  ControlFunction<Scalar> cf = empty_control(dom, window);
  const RealArray<Scalar> mag = f.magnitudes();
  for (Index k = 0; k < cf.size(); ++k) {
    const IndexVector first = cf.first_cell(k);
    const RealArray<Scalar> m = gather_window(mag, dom, first, window.side_cells);
    if ((m == 0).all()) continue;
    const RealArray<Scalar> w = gather_window(local_weight.values(), dom, first, window.side_cells);
    cf.values[k] = local_norm(m, w);
  }
  return cf;
}

/// Classical control function for L^{p}(weight^exponent) windows.
template <typename Scalar>
ControlFunction<Scalar> powered_control(const GridFunction<Scalar>& f, Scalar p, const Weight<Scalar>& weight,
                                        Scalar exponent, const WindowSpec& window) {
  detail::require_same_domain(f.domain(), weight.domain(), "control_function");
  const Scalar vol = f.domain().cell_volume();
  return control_values(f, weight, window, [&](const RealArray<Scalar>& m, const RealArray<Scalar>& w) {
    return lp_norm<Scalar>(m, p, w, exponent, vol);
  });
}

template <typename Scalar>
NormReport<Scalar> global_norm(const ControlFunction<Scalar>& cf, const SpaceDescriptor<Scalar>& global) {
  const RealArray<Scalar> w = anchor_weights(global.weight(), cf);
  if (global.kind() == SpaceKind::Classical) {
    NormReport<Scalar> r;
    r.value = lp_norm<Scalar>(cf.values, global.classical_space().p, w, Scalar(1), cf.anchor_volume());
    return r;
  }
  return grand_norm<Scalar>(cf.values, w, cf.anchor_volume(), global.grand_params());
}

}  // namespace detail

/// F(x) = || f chi_{Q+x} ||_local at every anchor x.
template <typename Scalar>
ControlFunction<Scalar> control_function(const GridFunction<Scalar>& f, const SpaceDescriptor<Scalar>& local,
                                         const WindowSpec& window) {
  detail::require_same_domain(f.domain(), local.weight().domain(), "control_function");
  const Scalar vol = f.domain().cell_volume();
  if (local.kind() == SpaceKind::Classical)
    return detail::powered_control(f, local.classical_space().p, local.weight(), Scalar(1), window);
  const GrandParams<Scalar>& gp = local.grand_params();
  return detail::control_values(f, local.weight(), window,
                                [&](const RealArray<Scalar>& m, const RealArray<Scalar>& w) {
                                  return detail::grand_norm<Scalar>(m, w, vol, gp).value;
                                });
}

/// || F ||_global on the anchor lattice. The report carries the outer eps
/// curve when the global space is grand.
template <typename Scalar>
NormReport<Scalar> amalgam_norm(const GridFunction<Scalar>& f, const AmalgamSpec<Scalar>& spec) {
  spec.validate(f.domain());
  return detail::global_norm(control_function(f, spec.local, spec.window), spec.global);
}

/// || f ||_{W(L^{p-eps}(a^{s(eps)}), L^{q-eta}(b^{s(eta)}))} for a grand/grand spec,
/// where s(.) is the weight exponent of the spec's variant (eps/p for EXPONENT_OVER_P).
template <typename Scalar>
Scalar mixed_norm_family(const GridFunction<Scalar>& f, const AmalgamSpec<Scalar>& spec, Scalar eps, Scalar eta) {
  spec.validate(f.domain());
  if (spec.local.kind() != SpaceKind::Grand || spec.global.kind() != SpaceKind::Grand)
    throw std::invalid_argument("mixed_norm_family: local and global spaces must both be grand");
  const GrandParams<Scalar>& lp = spec.local.grand_params();
  const GrandParams<Scalar>& gp = spec.global.grand_params();
  if (!(eps > 0 && eps <= lp.p - 1))
    throw std::invalid_argument("mixed_norm_family: eps must satisfy 0 < eps <= p-1");
  if (!(eta > 0 && eta <= gp.p - 1))
    throw std::invalid_argument("mixed_norm_family: eta must satisfy 0 < eta <= q-1");
  const ControlFunction<Scalar> cf =
      detail::powered_control(f, lp.p - eps, lp.grandizer, lp.weight_exponent(eps), spec.window);
  const RealArray<Scalar> b = detail::anchor_weights(gp.grandizer, cf);
  return detail::lp_norm<Scalar>(cf.values, gp.p - eta, b, gp.weight_exponent(eta), cf.anchor_volume());
}

}  // namespace gwa
