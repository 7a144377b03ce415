#pragma once

#include <cstddef>

#include "qmp/mp_law.hpp"
#include "qmp/spectra.hpp"

namespace qmp {

/// Constants of the smoothing inequality. `bai_a` is the half-width of the
/// Cauchy window defining gamma = (1/pi) int_{|u|<a} du / (1+u^2).
struct BaiConstants {
  double bai_a = 0.0;
  double gamma = 0.0;
  double A = 0.0;
  double B = 0.0;
  double kappa = 0.0;

  /// 1 / (pi (1 - kappa) (2 gamma - 1)).
  double prefactor() const;
};

/// Validates gamma > 1/2, A > B > 0, kappa < 1; throws std::invalid_argument otherwise.
BaiConstants bai_constants(double bai_a, double A, double B);

/// bai_a = sqrt(3) (gamma = 2/3), B = b_support + 1, A = 5B + 1.
BaiConstants make_constants(double b_support, double bai_a = 1.7320508075688772);

struct BaiBoundReport {
  double v = 0.0;
  double term_stieltjes = 0.0;  // int_{-A}^{A} |f(u+iv) - g(u+iv)| du
  double term_tail = 0.0;       // 2 pi v^{-1} int_{|x|>B} |F - G| dx
  double term_smoothing = 0.0;  // v^{-1} sup_x int_{|s|<=2va} |G(x+s) - G(x)| ds
  double smoothing_closed_form = 0.0;  // modulus-integral bound, NaN when y > 1
  double smoothing_grid = 0.0;         // direct sup over an x-grid
  double prefactor = 0.0;
  double total = 0.0;
  double observed_ks = 0.0;  // sup_x |F(x) - G(x)|

  bool holds() const noexcept { return observed_ks <= total; }
};

/// Right-hand side of the smoothing inequality for F against the law, and the
/// Kolmogorov distance it bounds. Throws NumericalError naming the failing term.
BaiBoundReport bai_rhs(const StepCDF& f, const MPLaw& law, double v, const BaiConstants& c);

/// multiplier * n^{-2/5}.
double default_bound_v(std::size_t n, double multiplier = 1.0);

}  // namespace qmp
