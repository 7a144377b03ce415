#pragma once

#include "qmp/complex_matrix.hpp"
#include "qmp/spectra.hpp"

namespace qmp {

/// Marchenko–Pastur law with ratio y = p/n and scale sigma2.
///
/// Density (1/(2 pi x y sigma2)) sqrt((b-x)(x-a)) on [a, b] with
/// a = sigma2 (1-sqrt y)^2, b = sigma2 (1+sqrt y)^2, plus an atom of mass
/// 1 - 1/y at the origin when y > 1.
class MPLaw {
 public:
  /// Throws std::invalid_argument unless y > 0 and sigma2 > 0 are finite.
  explicit MPLaw(double y, double sigma2 = 1.0);

  double y() const noexcept { return y_; }
  double sigma2() const noexcept { return sigma2_; }
  double lower_edge() const noexcept { return a_; }
  double upper_edge() const noexcept { return b_; }
  double atom() const noexcept { return y_ > 1.0 ? 1.0 - 1.0 / y_ : 0.0; }

 private:
  double y_;
  double sigma2_;
  double a_;
  double b_;
};

/// z = u + i v with v > 0.
class UpperHalfPoint {
 public:
  /// Throws std::invalid_argument unless v > 0.
  UpperHalfPoint(double u, double v);

  double u() const noexcept { return u_; }
  double v() const noexcept { return v_; }
  Complex z() const noexcept { return {u_, v_}; }

 private:
  double u_;
  double v_;
};

/// v together with v_y = sqrt(a) + sqrt(v).
struct SmoothingScale {
  double v = 0.0;
  double v_y = 0.0;
};

SmoothingScale smoothing_scale(const MPLaw& law, double v);

double density(const MPLaw& law, double x);

/// Includes the atom for x >= 0. The continuous part is integrated with the
/// substitution x = a + (b-a) sin^2(theta/2), which removes the square-root
/// endpoint behaviour, by adaptive Gauss–Kronrod at 1e-10 relative tolerance.
double cdf(const MPLaw& law, double x);

/// Inverse CDF; returns 0 for q inside the atom.
double quantile(const MPLaw& law, double q);

/// Phi(t) = int_{-inf}^t F(s) ds = E (t - X)_+.
double integrated_cdf(const MPLaw& law, double t);

/// sup-free window integral int_{|s|<=h} |F(x+s) - F(x)| ds at a single x,
/// equal to Phi(x+h) - 2 Phi(x) + Phi(x-h) because F is nondecreasing.
double window_increment_integral(const MPLaw& law, double x, double h);

/// CDF wrapper carrying the atom for exact Kolmogorov evaluation.
ReferenceCdf reference_cdf(const MPLaw& law);

/// Closed-form Stieltjes transform (sigma2 = 1 only); the square-root branch
/// is chosen so that Im s(z) > 0.
Complex stieltjes(const MPLaw& law, const UpperHalfPoint& z);

/// Continuity modulus g(v) = 2v / (y (sqrt(a) + sqrt(v))) for y <= 1:
/// sup_x |F(x+v) - F(x)| <= g(v).
double smoothing_modulus(const MPLaw& law, double v);

/// int_{|s|<=h} g(|s|) ds, an x-uniform bound on window_increment_integral.
double modulus_window_integral(const MPLaw& law, double h);

/// (11 sqrt(2(1+y)) / (3 pi y)) v^2 / v_y, the stated bound on
/// sup_x int_{|u|<v} |F(x+u) - F(x)| du for y <= 1.
double window_increment_bound(const MPLaw& law, double v);

/// sqrt(2) / (sqrt(y) v_y), the stated bound on |s(z)|.
double stieltjes_modulus_bound(const MPLaw& law, double v);

}  // namespace qmp
