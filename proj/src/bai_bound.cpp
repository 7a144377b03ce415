#include "qmp/bai_bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmp/errors.hpp"
#include "qmp/fixed_point.hpp"
#include "qmp/quadrature.hpp"

namespace qmp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kSmoothingGrid = 801;

template <class Fn>
double with_term(const char* term, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("bai_rhs ") + term + ": " + e.what());
  }
}

double stieltjes_term(const StepCDF& f, const MPLaw& law, double v, double A) {
  auto integrand = [&](double u) {
    const UpperHalfPoint z(u, v);
    return std::abs(empirical_stieltjes(f, z) - stieltjes(law, z));
  };
  // Pieces about v wide so that isolated resolvent peaks are resolved.
  const auto pieces =
      static_cast<std::size_t>(std::clamp(std::ceil(2.0 * A / v), 16.0, 4000.0));
  const double w = 2.0 * A / static_cast<double>(pieces);
  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = -A + w * static_cast<double>(i);
    const double hi = i + 1 == pieces ? A : lo + w;
    total += integrate(integrand, lo, hi, 1e-8, 1e-12, "stieltjes difference");
  }
  return total;
}

// int over [lo, hi] of |F - G|, with F constant between its jumps.
double abs_difference_integral(const StepCDF& f, const MPLaw& law, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double x : f.jump_points)
    if (x > lo && x < hi) cuts.push_back(x);
  for (double x : {law.lower_edge(), law.upper_edge(), 0.0})
    if (x > lo && x < hi) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x0 = cuts[i];
    const double x1 = cuts[i + 1];
    const double mid = 0.5 * (x0 + x1);
    const double fw = f(mid);
    const bool smooth_g = x0 >= law.lower_edge() && x1 <= law.upper_edge() &&
                          law.upper_edge() > law.lower_edge();
    if (!smooth_g) {
      total += std::abs(fw - cdf(law, mid)) * (x1 - x0);
    } else {
      auto g = [&](double x) { return std::abs(fw - cdf(law, x)); };
      total += integrate(g, x0, x1, 1e-9, 1e-13, "tail difference");
    }
  }
  return total;
}

double tail_term(const StepCDF& f, const MPLaw& law, double v, double B) {
  const double right_end = std::max({B, f.jump_points.back(), law.upper_edge()});
  const double left_end = std::min({-B, f.jump_points.front(), law.lower_edge()});
  const double area = abs_difference_integral(f, law, B, right_end) +
                      abs_difference_integral(f, law, left_end, -B);
  return 2.0 * kPi / v * area;
}

double smoothing_grid(const MPLaw& law, double h) {
  const double lo = law.lower_edge() - h;
  const double hi = law.upper_edge() + h;
  double best = 0.0;
  for (std::size_t i = 0; i < kSmoothingGrid; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (kSmoothingGrid - 1);
    best = std::max(best, window_increment_integral(law, x, h));
  }
  if (law.atom() > 0.0) best = std::max(best, window_increment_integral(law, 0.0, h));
  return best;
}

}  // namespace

double BaiConstants::prefactor() const { return 1.0 / (kPi * (1.0 - kappa) * (2.0 * gamma - 1.0)); }

BaiConstants bai_constants(double bai_a, double A, double B) {
  if (!(bai_a > 0.0)) throw std::invalid_argument("bai_constants: a must be > 0");
  const double gamma = 2.0 / kPi * std::atan(bai_a);
  if (!(gamma > 0.5)) throw std::invalid_argument("bai_constants: gamma must exceed 1/2 (a > 1)");
  if (!(B > 0.0) || !(A > B)) throw std::invalid_argument("bai_constants: requires A > B > 0");
  const double kappa = 4.0 * B / (kPi * (A - B) * (2.0 * gamma - 1.0));
  if (!(kappa < 1.0)) throw std::invalid_argument("bai_constants: kappa must be < 1");
  return {bai_a, gamma, A, B, kappa};
}

BaiConstants make_constants(double b_support, double bai_a) {
  if (!(b_support > 0.0)) throw std::invalid_argument("make_constants: b must be > 0");
  const double B = b_support + 1.0;
  return bai_constants(bai_a, 5.0 * B + 1.0, B);
}

BaiBoundReport bai_rhs(const StepCDF& f, const MPLaw& law, double v, const BaiConstants& c) {
  if (!(v > 0.0)) throw std::invalid_argument("bai_rhs: v must be > 0");
  if (f.jump_points.empty()) throw std::invalid_argument("bai_rhs: empty step CDF");
  BaiBoundReport r;
  r.v = v;
  r.term_stieltjes = with_term("stieltjes term", [&] { return stieltjes_term(f, law, v, c.A); });
  r.term_tail = with_term("tail term", [&] { return tail_term(f, law, v, c.B); });

  const double h = 2.0 * v * c.bai_a;
  r.smoothing_grid = with_term("smoothing term", [&] { return smoothing_grid(law, h) / v; });
  r.smoothing_closed_form = law.y() <= 1.0
                                ? with_term("smoothing term",
                                            [&] { return modulus_window_integral(law, h) / v; })
                                : std::numeric_limits<double>::quiet_NaN();
  r.term_smoothing = std::isnan(r.smoothing_closed_form)
                         ? r.smoothing_grid
                         : std::max(r.smoothing_grid, r.smoothing_closed_form);
  r.prefactor = c.prefactor();
  r.total = r.prefactor * (r.term_stieltjes + r.term_tail + r.term_smoothing);
  r.observed_ks = kolmogorov_distance(f, reference_cdf(law));
  return r;
}

double default_bound_v(std::size_t n, double multiplier) {
  if (n == 0) throw std::invalid_argument("default_bound_v: n must be >= 1");
  return multiplier * std::pow(static_cast<double>(n), -0.4);
}

}  // namespace qmp
