#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qmp/errors.hpp"

namespace qmp {

namespace detail {

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;

  friend bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }
};

// One 15-point Kronrod panel with its embedded 7-point Gauss estimate. Boost
// supplies the nodes and weights; the error is |K - G| in the panel's own units.
template <class F>
Panel gk15_panel(F& f, double lo, double hi) {
  using K = boost::math::quadrature::gauss_kronrod<double, 15>;
  using G = boost::math::quadrature::gauss<double, 7>;
  const auto& x = K::abscissa();
  const auto& wk = K::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f0 = f(mid);
  double kron = f0 * wk[0];
  double gauss = f0 * wg[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double pair = f(mid + half * x[i]) + f(mid - half * x[i]);
    kron += pair * wk[i];
    if (i % 2 == 0) gauss += pair * wg[i / 2];
  }
  return {lo, hi, kron * half, std::abs(kron - gauss) * half};
}

}  // namespace detail

/// Globally adaptive 15-point Gauss–Kronrod on [lo, hi]: the panel with the
/// largest error estimate is bisected until the summed estimate falls below
/// max(abs_tol, rel_tol * |I|). Throws NumericalError when that does not
/// happen within the panel budget or the result is not finite.
template <class F>
double integrate(F&& f, double lo, double hi, double rel_tol, double abs_tol,
                 const char* what = "integral") {
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, rel_tol, abs_tol, what);
  constexpr std::size_t kMaxPanels = 4000;

  std::vector<detail::Panel> heap{detail::gk15_panel(f, lo, hi)};
  double value = heap.front().value;
  double error = heap.front().error;
  std::vector<detail::Panel> done;  // panels too narrow to split further
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && !heap.empty() &&
         heap.size() + done.size() < kMaxPanels) {
    std::pop_heap(heap.begin(), heap.end());
    const detail::Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      done.push_back(worst);
      continue;
    }
    const auto left = detail::gk15_panel(f, worst.lo, mid);
    const auto right = detail::gk15_panel(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    for (const auto& p : {left, right}) {
      heap.push_back(p);
      std::push_heap(heap.begin(), heap.end());
    }
  }
  // Re-sum to shed the drift of the running updates.
  value = 0.0;
  error = 0.0;
  for (const auto* set : {&heap, &done})
    for (const auto& p : *set) {
      value += p.value;
      error += p.error;
    }
  if (!std::isfinite(value) || error > 10.0 * std::max(abs_tol, rel_tol * std::abs(value))) {
    throw NumericalError(std::string(what) + ": quadrature did not converge on [" +
                         std::to_string(lo) + ", " + std::to_string(hi) +
                         "], error estimate " + std::to_string(error));
  }
  return value;
}

}  // namespace qmp
