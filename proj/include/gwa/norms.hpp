#pragma once

#include "gwa/check_result.hpp"
#include "gwa/golden.hpp"
#include "gwa/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gwa {

/// Which of the two equivalent grand norms is evaluated.
///  ExponentOverP: sup eps^theta       * ||f||_{L^{p-eps}(a^{eps/p})}
///  ExponentFull:  sup eps^{theta/(p-eps)} * ||f||_{L^{p-eps}(a^{eps})}
enum class GrandVariant { ExponentOverP, ExponentFull };

enum class EpsGridMode { Geometric, Linear, Explicit };

inline const char* to_string(GrandVariant v) {
  return v == GrandVariant::ExponentOverP ? "EXPONENT_OVER_P" : "EXPONENT_FULL";
}

inline const char* to_string(EpsGridMode m) {
  switch (m) {
    case EpsGridMode::Geometric: return "GEOMETRIC";
    case EpsGridMode::Linear: return "LINEAR";
    case EpsGridMode::Explicit: return "EXPLICIT";
  }
  return "?";
}

/// Strictly increasing sample of (0, p-1] whose last point is exactly p-1.
template <typename Scalar = double>
class EpsGrid {
 public:
  static constexpr Index kDefaultCount = 33;
  static constexpr double kDefaultMinFraction = 1e-4;

  static EpsGrid geometric(Scalar p, Index count = kDefaultCount,
                           Scalar min_eps = std::numeric_limits<Scalar>::quiet_NaN()) {
    const Scalar top = check_p(p);
    if (std::isnan(min_eps)) min_eps = top * Scalar(kDefaultMinFraction);
    check_count(count, min_eps, top);
    std::vector<Scalar> v(static_cast<std::size_t>(count));
    if (count == 1) {
      v[0] = top;
    } else {
      const Scalar ratio = std::pow(min_eps / top, Scalar(1) / static_cast<Scalar>(count - 1));
      for (Index k = 0; k < count; ++k)
        v[static_cast<std::size_t>(k)] = top * std::pow(ratio, static_cast<Scalar>(count - 1 - k));
      v.front() = min_eps;
      v.back() = top;
    }
    return EpsGrid(EpsGridMode::Geometric, count, min_eps, p, std::move(v));
  }

  static EpsGrid linear(Scalar p, Index count = kDefaultCount,
                        Scalar min_eps = std::numeric_limits<Scalar>::quiet_NaN()) {
    const Scalar top = check_p(p);
    if (std::isnan(min_eps)) min_eps = top * Scalar(kDefaultMinFraction);
    check_count(count, min_eps, top);
    std::vector<Scalar> v(static_cast<std::size_t>(count));
    if (count == 1) {
      v[0] = top;
    } else {
      const Scalar step = (top - min_eps) / static_cast<Scalar>(count - 1);
      for (Index k = 0; k < count; ++k)
        v[static_cast<std::size_t>(k)] = min_eps + step * static_cast<Scalar>(k);
      v.back() = top;
    }
    return EpsGrid(EpsGridMode::Linear, count, min_eps, p, std::move(v));
  }

  /// Sorted, de-duplicated; p-1 is appended when missing.
  static EpsGrid explicit_values(Scalar p, std::vector<Scalar> values) {
    const Scalar top = check_p(p);
    for (Scalar e : values)
      if (!(e > 0 && e <= top))
        throw std::invalid_argument("EpsGrid: every eps must satisfy 0 < eps <= p-1 (got " +
                                    std::to_string(static_cast<double>(e)) + ")");
    values.push_back(top);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    const Index count = static_cast<Index>(values.size());
    const Scalar min_eps = values.front();
    return EpsGrid(EpsGridMode::Explicit, count, min_eps, p, std::move(values));
  }

  /// This grid with `extra` points merged in.
  EpsGrid with_points(const std::vector<Scalar>& extra) const {
    std::vector<Scalar> v = values_;
    v.insert(v.end(), extra.begin(), extra.end());
    return explicit_values(p_, std::move(v));
  }

  EpsGridMode mode() const { return mode_; }
  Index count() const { return count_; }
  Scalar min_eps() const { return min_eps_; }
  Scalar upper() const { return top_; }
  const std::vector<Scalar>& values() const { return values_; }

 private:
  EpsGrid(EpsGridMode mode, Index count, Scalar min_eps, Scalar p, std::vector<Scalar> v)
      : mode_(mode), count_(count), min_eps_(min_eps), p_(p), top_(p - 1), values_(std::move(v)) {
    for (std::size_t k = 1; k < values_.size(); ++k)
      if (!(values_[k] > values_[k - 1]))
        throw std::invalid_argument("EpsGrid: values must be strictly increasing");
  }

  static Scalar check_p(Scalar p) {
    if (!(p > 1)) throw std::invalid_argument("EpsGrid: invariant p > 1 violated");
    return p - 1;
  }

  static void check_count(Index count, Scalar min_eps, Scalar top) {
    if (count < 1) throw std::invalid_argument("EpsGrid: count must be >= 1");
    if (count > 1 && !(min_eps > 0 && min_eps < top))
      throw std::invalid_argument("EpsGrid: min_eps must lie in (0, p-1)");
  }

  EpsGridMode mode_;
  Index count_;
  Scalar min_eps_;
  Scalar p_;
  Scalar top_;
  std::vector<Scalar> values_;
};

/// Parameters of a (generalized) grand Lebesgue norm.
template <typename Scalar = double>
struct GrandParams {
  Scalar p;
  Scalar theta;
  GrandVariant variant;
  Weight<Scalar> grandizer;
  EpsGrid<Scalar> eps;
  bool refine = true;

  GrandParams(Scalar p_, Weight<Scalar> grandizer_, Scalar theta_ = 1,
              GrandVariant variant_ = GrandVariant::ExponentOverP)
      : p(p_), theta(theta_), variant(variant_), grandizer(std::move(grandizer_)),
        eps(EpsGrid<Scalar>::geometric(p_)) {
    validate();
  }

  GrandParams(Scalar p_, Weight<Scalar> grandizer_, Scalar theta_, GrandVariant variant_,
              EpsGrid<Scalar> eps_, bool refine_ = true)
      : p(p_), theta(theta_), variant(variant_), grandizer(std::move(grandizer_)),
        eps(std::move(eps_)), refine(refine_) {
    validate();
  }

  void validate() const {
    if (!(p > 1)) throw std::invalid_argument("GrandParams: invariant p > 1 violated");
    if (!(theta > 0)) throw std::invalid_argument("GrandParams: invariant theta > 0 violated");
    if (eps.values().empty()) throw std::invalid_argument("GrandParams: empty eps grid");
    if (std::abs(eps.upper() - (p - 1)) > Scalar(1e-12) * p)
      throw std::invalid_argument("GrandParams: eps grid was built for a different p");
  }

  /// Power applied to the grandizer at a given eps.
  Scalar weight_exponent(Scalar e) const {
    return variant == GrandVariant::ExponentOverP ? e / p : e;
  }

  /// Outer factor multiplying the inner L^{p-eps} norm.
  Scalar factor(Scalar e) const {
    return variant == GrandVariant::ExponentOverP ? std::pow(e, theta)
                                                  : std::pow(e, theta / (p - e));
  }

  GrandParams with_grandizer(Weight<Scalar> w) const {
    return GrandParams(p, std::move(w), theta, variant, eps, refine);
  }

  GrandParams with_eps(EpsGrid<Scalar> grid) const {
    return GrandParams(p, grandizer, theta, variant, std::move(grid), refine);
  }
};

template <typename Scalar>
struct CurvePoint {
  Scalar eps;
  Scalar inner_norm;
  Scalar weighted_term;
};

template <typename Scalar = double>
struct NormReport {
  Scalar value = 0;
  Scalar argmax_eps = std::numeric_limits<Scalar>::quiet_NaN();
  std::vector<CurvePoint<Scalar>> curve;
  bool refined = false;
};

namespace detail {

/// (sum_i mag_i^p * weight_i^s * vol)^{1/p}, scaled by max(mag) to avoid
/// overflow and underflow. Every norm in the library goes through here.
template <typename Scalar>
Scalar lp_norm(const RealArray<Scalar>& mag, Scalar p, const RealArray<Scalar>& weight,
               Scalar weight_exponent, Scalar cell_volume) {
  if (mag.size() == 0) return 0;
  const Scalar top = mag.maxCoeff();
  if (top == 0) return 0;
  Scalar sum;
  if (weight_exponent == 0)
    sum = (mag / top).pow(p).sum();
  else if (weight_exponent == 1)
    sum = ((mag / top).pow(p) * weight).sum();
  else
    sum = ((mag / top).pow(p) * weight.pow(weight_exponent)).sum();
  return top * std::pow(sum * cell_volume, Scalar(1) / p);
}

template <typename Scalar>
Scalar grand_inner(const RealArray<Scalar>& mag, const RealArray<Scalar>& grandizer,
                   Scalar cell_volume, const GrandParams<Scalar>& gp, Scalar e) {
  return lp_norm(mag, gp.p - e, grandizer, gp.weight_exponent(e), cell_volume);
}

template <typename Scalar>
NormReport<Scalar> grand_norm(const RealArray<Scalar>& mag, const RealArray<Scalar>& grandizer,
                              Scalar cell_volume, const GrandParams<Scalar>& gp) {
  const auto& grid = gp.eps.values();
  if (grid.empty()) throw std::invalid_argument("grand_norm: empty eps grid");
  NormReport<Scalar> r;
  r.curve.reserve(grid.size() + 1);
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Scalar e = grid[k];
    const Scalar inner = grand_inner(mag, grandizer, cell_volume, gp, e);
    const Scalar term = gp.factor(e) * inner;
    r.curve.push_back({e, inner, term});
    if (term > r.curve[best].weighted_term) best = k;
  }
  r.value = r.curve[best].weighted_term;
  r.argmax_eps = r.curve[best].eps;

  if (!gp.refine || r.value == 0 || best + 1 == grid.size()) return r;

  r.refined = true;
  const Scalar lo = best == 0 ? Scalar(0) : grid[best - 1];
  const Scalar hi = grid[best + 1];
  auto term_at = [&](Scalar e) { return gp.factor(e) * grand_inner(mag, grandizer, cell_volume, gp, e); };
  const auto opt = golden_section_maximize<Scalar>(term_at, lo, hi);
  if (opt.value > r.value) {
    const Scalar inner = grand_inner(mag, grandizer, cell_volume, gp, opt.x);
    const CurvePoint<Scalar> pt{opt.x, inner, opt.value};
    r.curve.insert(std::upper_bound(r.curve.begin(), r.curve.end(), opt.x,
                                    [](Scalar e, const CurvePoint<Scalar>& c) { return e < c.eps; }),
                   pt);
    r.value = opt.value;
    r.argmax_eps = opt.x;
  }
  return r;
}

}  // namespace detail

/// (integral |f|^p w)^{1/p}; p >= 1.
template <typename Scalar>
Scalar weighted_lp_norm(const GridFunction<Scalar>& f, Scalar p, const Weight<Scalar>& w) {
  detail::require_same_domain(f.domain(), w.domain(), "weighted_lp_norm");
  if (!(p >= 1)) throw std::invalid_argument("weighted_lp_norm: p must be >= 1");
  return detail::lp_norm<Scalar>(f.magnitudes(), p, w.values(), Scalar(1), f.domain().cell_volume());
}

template <typename Scalar>
Scalar lp_norm(const GridFunction<Scalar>& f, Scalar p) {
  if (!(p >= 1)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const RealArray<Scalar> none;
  return detail::lp_norm<Scalar>(f.magnitudes(), p, none, Scalar(0), f.domain().cell_volume());
}

/// Grand norm as a max over the eps grid, followed (when gp.refine) by a
/// golden-section search between the neighbours of the discrete argmax.
/// The refined point is kept only if it beats the grid maximum.
template <typename Scalar>
NormReport<Scalar> grand_norm(const GridFunction<Scalar>& f, const GrandParams<Scalar>& gp) {
  detail::require_same_domain(f.domain(), gp.grandizer.domain(), "grand_norm");
  return detail::grand_norm<Scalar>(f.magnitudes(), gp.grandizer.values(), f.domain().cell_volume(), gp);
}

/// The (eps, weighted term) curve on the eps grid, with no max reduction.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> grand_norm_curve(const GridFunction<Scalar>& f,
                                                        const GrandParams<Scalar>& gp) {
  detail::require_same_domain(f.domain(), gp.grandizer.domain(), "grand_norm_curve");
  const RealArray<Scalar> mag = f.magnitudes();
  const Scalar vol = f.domain().cell_volume();
  std::vector<std::pair<Scalar, Scalar>> out;
  out.reserve(gp.eps.values().size());
  for (Scalar e : gp.eps.values())
    out.emplace_back(e, gp.factor(e) * detail::grand_inner(mag, gp.grandizer.values(), vol, gp, e));
  return out;
}

/// Per-eps Hoelder bound ||f||_{L^{p-eps}(a^{eps/p})} <= ||f||_p * ||a||_1^{eps/(p(p-eps))}.
template <typename Scalar>
CheckResult holder_grandizer_bound(const GridFunction<Scalar>& f, const GrandParams<Scalar>& gp,
                                   double tolerance = 1e-12) {
  detail::require_same_domain(f.domain(), gp.grandizer.domain(), "holder_grandizer_bound");
  if (gp.variant != GrandVariant::ExponentOverP)
    throw std::invalid_argument("holder_grandizer_bound: requires the EXPONENT_OVER_P variant");
  CheckRecorder rec("holder_grandizer_bound", {"eps", "inner_norm", "bound", "margin"});
  const RealArray<Scalar> mag = f.magnitudes();
  const Scalar vol = f.domain().cell_volume();
  const Scalar l1 = integrate(gp.grandizer);
  const Scalar lp = lp_norm(f, gp.p);
  rec.measure("l1_mass", static_cast<double>(l1));
  rec.measure("lp_norm", static_cast<double>(lp));
  for (Scalar e : gp.eps.values()) {
    const Scalar inner = detail::grand_inner(mag, gp.grandizer.values(), vol, gp, e);
    const Scalar bound = lp * std::pow(l1, e / (gp.p * (gp.p - e)));
    const double scale = std::max(static_cast<double>(bound), std::numeric_limits<double>::min());
    const double margin = bound == 0 && inner == 0 ? 0.0 : static_cast<double>(bound - inner) / scale;
    const std::string id = "eps=" + std::to_string(static_cast<double>(e));
    rec.expect(id, margin, tolerance, "Hoelder grandizer bound");
    rec.row(id, {static_cast<double>(e), static_cast<double>(inner), static_cast<double>(bound), margin});
  }
  return rec.finish();
}

}  // namespace gwa
