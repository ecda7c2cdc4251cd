#pragma once

#include "gwa/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gwa {

/// Half-widths (in cells) of the centered balls. In 2-D the balls are
/// Chebyshev squares.
struct RadiusSet {
  std::vector<Index> radii_cells;
  bool include_center_only = true;

  /// 1, 2, ..., max_radius.
  static RadiusSet all(Index max_radius, bool include_center_only = true) {
    RadiusSet rs{{}, include_center_only};
    for (Index r = 1; r <= max_radius; ++r) rs.radii_cells.push_back(r);
    return rs;
  }

  /// 1, 2, 4, ... <= max_radius. Changes Mf by a bounded factor relative to all().
  static RadiusSet dyadic(Index max_radius, bool include_center_only = true) {
    RadiusSet rs{{}, include_center_only};
    for (Index r = 1; r <= max_radius; r *= 2) rs.radii_cells.push_back(r);
    return rs;
  }

  /// Default for a domain: every radius up to half the longest axis.
  template <typename Scalar>
  static RadiusSet for_domain(const BoxDomain<Scalar>& domain) {
    return all(std::max<Index>(1, domain.points().maxCoeff() / 2));
  }

  template <typename Scalar>
  void validate(const BoxDomain<Scalar>& domain) const {
    for (std::size_t k = 0; k < radii_cells.size(); ++k) {
      if (radii_cells[k] < 1) throw std::invalid_argument("RadiusSet: radii must be >= 1");
      if (k > 0 && radii_cells[k] <= radii_cells[k - 1])
        throw std::invalid_argument("RadiusSet: radii must be strictly increasing");
    }
    if (!radii_cells.empty() && radii_cells.back() > domain.points().maxCoeff())
      throw std::invalid_argument("RadiusSet: radius exceeds the grid extent");
    if (radii_cells.empty() && !include_center_only)
      throw std::invalid_argument("RadiusSet: no radii and no center term");
  }
};

template <typename Scalar = double>
struct MaximalResult {
  GridFunction<Scalar> mf;
  /// Radius (in cells) attaining the max per cell; 0 means the center term.
  std::vector<Index> argmax_radius;
};

namespace detail {

/// Tracks the running maximum with ties broken toward the smaller radius
/// (radii are visited in increasing order).
template <typename Scalar>
struct MaxTracker {
  Scalar best = -1;
  Index radius = -1;
  void offer(Scalar value, Index r) {
    if (value > best) {
      best = value;
      radius = r;
    }
  }
};

template <typename Scalar>
MaximalResult<Scalar> pack(const BoxDomain<Scalar>& dom, const RealArray<Scalar>& mf, std::vector<Index> arg) {
  return MaximalResult<Scalar>{GridFunction<Scalar>(dom, mf.template cast<std::complex<Scalar>>()),
                               std::move(arg)};
}

}  // namespace detail

/// Direct evaluation: every ball average is summed cell by cell.
template <typename Scalar>
MaximalResult<Scalar> maximal_naive(const GridFunction<Scalar>& f, const RadiusSet& rs) {
  const auto& dom = f.domain();
  rs.validate(dom);
  const RealArray<Scalar> mag = f.magnitudes();
  RealArray<Scalar> mf(f.size());
  std::vector<Index> arg(static_cast<std::size_t>(f.size()));
  const IndexVector& n = dom.points();

  for (Index i = 0; i < f.size(); ++i) {
    const IndexVector c = dom.unravel(i);
    detail::MaxTracker<Scalar> t;
    if (rs.include_center_only) t.offer(mag[i], 0);
    for (Index r : rs.radii_cells) {
      long double sum = 0;
      Index count = 0;
      if (dom.dim() == 1) {
        for (Index j = std::max<Index>(0, c[0] - r); j <= std::min<Index>(n[0] - 1, c[0] + r); ++j) {
          sum += mag[j];
          ++count;
        }
      } else {
        for (Index j0 = std::max<Index>(0, c[0] - r); j0 <= std::min<Index>(n[0] - 1, c[0] + r); ++j0)
          for (Index j1 = std::max<Index>(0, c[1] - r); j1 <= std::min<Index>(n[1] - 1, c[1] + r); ++j1) {
            sum += mag[j0 * n[1] + j1];
            ++count;
          }
      }
      t.offer(static_cast<Scalar>(sum / static_cast<long double>(count)), r);
    }
    mf[i] = t.best;
    arg[static_cast<std::size_t>(i)] = t.radius;
  }
  return detail::pack(dom, mf, std::move(arg));
}

/// Same contract as maximal_naive; ball sums and cell counts come from
/// (separable, in 2-D summed-area) prefix sums.
template <typename Scalar>
MaximalResult<Scalar> maximal_fast(const GridFunction<Scalar>& f, const RadiusSet& rs) {
  using Acc = long double;
  const auto& dom = f.domain();
  rs.validate(dom);
  const RealArray<Scalar> mag = f.magnitudes();
  RealArray<Scalar> mf(f.size());
  std::vector<Index> arg(static_cast<std::size_t>(f.size()));
  const IndexVector& n = dom.points();

  if (dom.dim() == 1) {
    const Index len = n[0];
    std::vector<Acc> sums(static_cast<std::size_t>(len + 1), 0), ones(static_cast<std::size_t>(len + 1), 0);
    for (Index j = 0; j < len; ++j) {
      sums[j + 1] = sums[j] + mag[j];
      ones[j + 1] = ones[j] + 1;
    }
    for (Index i = 0; i < len; ++i) {
      detail::MaxTracker<Scalar> t;
      if (rs.include_center_only) t.offer(mag[i], 0);
      for (Index r : rs.radii_cells) {
        const Index lo = std::max<Index>(0, i - r);
        const Index hi = std::min<Index>(len - 1, i + r) + 1;
        t.offer(static_cast<Scalar>((sums[hi] - sums[lo]) / (ones[hi] - ones[lo])), r);
      }
      mf[i] = t.best;
      arg[static_cast<std::size_t>(i)] = t.radius;
    }
    return detail::pack(dom, mf, std::move(arg));
  }

  // Summed-area tables, built one axis at a time.
  const Index rows = n[0], cols = n[1];
  const Index stride = cols + 1;
  std::vector<Acc> sums(static_cast<std::size_t>((rows + 1) * stride), 0);
  std::vector<Acc> ones(sums.size(), 0);
  for (Index a = 0; a < rows; ++a)
    for (Index b = 0; b < cols; ++b) {
      sums[(a + 1) * stride + b + 1] = sums[(a + 1) * stride + b] + mag[a * cols + b];
      ones[(a + 1) * stride + b + 1] = ones[(a + 1) * stride + b] + 1;
    }
  for (Index a = 0; a < rows; ++a)
    for (Index b = 0; b <= cols; ++b) {
      sums[(a + 1) * stride + b] += sums[a * stride + b];
      ones[(a + 1) * stride + b] += ones[a * stride + b];
    }
  auto box = [&](const std::vector<Acc>& t, Index a0, Index a1, Index b0, Index b1) {
    return t[a1 * stride + b1] - t[a0 * stride + b1] - t[a1 * stride + b0] + t[a0 * stride + b0];
  };
  for (Index a = 0; a < rows; ++a)
    for (Index b = 0; b < cols; ++b) {
      const Index i = a * cols + b;
      detail::MaxTracker<Scalar> t;
      if (rs.include_center_only) t.offer(mag[i], 0);
      for (Index r : rs.radii_cells) {
        const Index a0 = std::max<Index>(0, a - r), a1 = std::min<Index>(rows - 1, a + r) + 1;
        const Index b0 = std::max<Index>(0, b - r), b1 = std::min<Index>(cols - 1, b + r) + 1;
        t.offer(static_cast<Scalar>(box(sums, a0, a1, b0, b1) / box(ones, a0, a1, b0, b1)), r);
      }
      mf[i] = t.best;
      arg[static_cast<std::size_t>(i)] = t.radius;
    }
  return detail::pack(dom, mf, std::move(arg));
}

/// Mf at the cells nearest to each 1-D sample point.
template <typename Scalar>
std::vector<std::pair<Scalar, Scalar>> maximal_tail_profile(const GridFunction<Scalar>& f, const RadiusSet& rs,
                                                            const std::vector<Scalar>& sample_points) {
  const auto& dom = f.domain();
  if (dom.dim() != 1) throw std::invalid_argument("maximal_tail_profile: 1-D domains only");
  std::vector<Index> cells;
  for (Scalar x : sample_points) {
    Point<Scalar> pt(1);
    pt << x;
    const Index c = dom.locate(pt);
    if (c < 0)
      throw std::invalid_argument("maximal_tail_profile: point " + std::to_string(static_cast<double>(x)) +
                                  " outside the domain");
    cells.push_back(c);
  }
  const MaximalResult<Scalar> m = maximal_fast(f, rs);
  std::vector<std::pair<Scalar, Scalar>> out;
  for (std::size_t k = 0; k < cells.size(); ++k) out.emplace_back(sample_points[k], m.mf[cells[k]].real());
  return out;
}

}  // namespace gwa
