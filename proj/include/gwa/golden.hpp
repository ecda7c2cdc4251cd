#pragma once

#include <cmath>
#include <cstddef>

namespace gwa {

template <typename Scalar>
struct ScalarOptimum {
  Scalar x;
  Scalar value;
};

/// Golden-section search for a maximum of `f` on the open interval (lo, hi).
/// Only interior points are evaluated. Returns the best point seen, which
/// is the maximizer when f is unimodal on the bracket.
template <typename Scalar, typename Function>
ScalarOptimum<Scalar> golden_section_maximize(Function&& f, Scalar lo, Scalar hi,
                                              Scalar rel_tol = Scalar(1e-10),
                                              std::size_t max_iter = 200) {
  const Scalar inv_phi = (std::sqrt(Scalar(5)) - Scalar(1)) / Scalar(2);
  Scalar c = hi - inv_phi * (hi - lo);
  Scalar d = lo + inv_phi * (hi - lo);
  Scalar fc = f(c);
  Scalar fd = f(d);
  ScalarOptimum<Scalar> best = fc >= fd ? ScalarOptimum<Scalar>{c, fc} : ScalarOptimum<Scalar>{d, fd};

  for (std::size_t it = 0; it < max_iter; ++it) {
    if (hi - lo <= rel_tol * std::abs(hi)) break;
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
      if (fc > best.value) best = {c, fc};
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
      if (fd > best.value) best = {d, fd};
    }
  }
  return best;
}

}  // namespace gwa
