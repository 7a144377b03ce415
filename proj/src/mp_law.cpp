#include "qmp/mp_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "qmp/errors.hpp"
#include "qmp/quadrature.hpp"

namespace qmp {

namespace {

constexpr double kCdfTol = 1e-10;

// x(theta) = a + (b - a) sin^2(theta / 2), theta in [0, pi].
double edge_angle(const MPLaw& law, double x) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  const double r = std::clamp((x - a) / (b - a), 0.0, 1.0);
  return 2.0 * std::asin(std::sqrt(r));
}

// int_a^{x(theta_hi)} w(x) f(x) dx over the continuous part, in theta.
template <class W>
double continuous_integral(const MPLaw& law, double theta_hi, W&& weight) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  const double half = 0.5 * (b - a);
  const double scale = half * half / (2.0 * std::numbers::pi * law.y() * law.sigma2());
  // sqrt((b-x)(x-a)) dx / x with sin(th) = 2 s c; the s^2 cancels exactly when a = 0.
  auto integrand = [&](double th) {
    const double s = std::sin(0.5 * th);
    const double c = std::cos(0.5 * th);
    const double x = a + (b - a) * s * s;
    const double ratio = a > 0.0 ? 4.0 * s * s * c * c / x : 4.0 * c * c / (b - a);
    return scale * ratio * weight(x);
  };
  return integrate(integrand, 0.0, theta_hi, kCdfTol, 1e-14, "Marchenko-Pastur cdf");
}

}  // namespace

MPLaw::MPLaw(double y, double sigma2) : y_(y), sigma2_(sigma2) {
  if (!(y > 0.0) || !std::isfinite(y)) throw std::invalid_argument("MPLaw: y must be > 0");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("MPLaw: sigma2 must be > 0");
  const double r = std::sqrt(y);
  a_ = sigma2 * (1.0 - r) * (1.0 - r);
  b_ = sigma2 * (1.0 + r) * (1.0 + r);
}

UpperHalfPoint::UpperHalfPoint(double u, double v) : u_(u), v_(v) {
  if (!(v > 0.0) || !std::isfinite(v) || !std::isfinite(u))
    throw std::invalid_argument("UpperHalfPoint: requires finite u and v > 0");
}

SmoothingScale smoothing_scale(const MPLaw& law, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("smoothing_scale: v must be > 0");
  return {v, std::sqrt(law.lower_edge()) + std::sqrt(v)};
}

double density(const MPLaw& law, double x) {
  const double a = law.lower_edge();
  const double b = law.upper_edge();
  if (!(x > a) || !(x < b) || x <= 0.0) return 0.0;
  return std::sqrt((b - x) * (x - a)) / (2.0 * std::numbers::pi * x * law.y() * law.sigma2());
}

double cdf(const MPLaw& law, double x) {
  const double atom = x >= 0.0 ? law.atom() : 0.0;
  if (x <= law.lower_edge()) return atom;
  if (x >= law.upper_edge()) return 1.0;
  const double value = atom + continuous_integral(law, edge_angle(law, x), [](double) { return 1.0; });
  return std::clamp(value, 0.0, 1.0);
}

double quantile(const MPLaw& law, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0, 1]");
  if (q <= law.atom()) return law.atom() > 0.0 ? 0.0 : law.lower_edge();
  if (q >= 1.0) return law.upper_edge();
  auto f = [&](double x) { return cdf(law, x) - q; };
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      f, law.lower_edge(), law.upper_edge(), f(law.lower_edge()), f(law.upper_edge()),
      boost::math::tools::eps_tolerance<double>(50), iters);
  return 0.5 * (bracket.first + bracket.second);
}

double integrated_cdf(const MPLaw& law, double t) {
  if (t <= 0.0 && t <= law.lower_edge()) return 0.0;
  const double atom_part = t > 0.0 ? law.atom() * t : 0.0;
  if (t >= law.upper_edge()) return t - law.sigma2();  // E X = sigma2
  if (t <= law.lower_edge()) return atom_part;
  return atom_part +
         continuous_integral(law, edge_angle(law, t), [t](double x) { return t - x; });
}

double window_increment_integral(const MPLaw& law, double x, double h) {
  if (!(h >= 0.0)) throw std::invalid_argument("window_increment_integral: h must be >= 0");
  const double v = integrated_cdf(law, x + h) - 2.0 * integrated_cdf(law, x) +
                   integrated_cdf(law, x - h);
  return std::max(0.0, v);
}

ReferenceCdf reference_cdf(const MPLaw& law) {
  ReferenceCdf r;
  r.cdf = [law](double x) { return cdf(law, x); };
  if (law.atom() > 0.0) {
    r.atoms = {0.0};
    r.left_limit = [law](double x) { return x == 0.0 ? 0.0 : cdf(law, x); };
  }
  return r;
}

Complex stieltjes(const MPLaw& law, const UpperHalfPoint& zp) {
  if (law.sigma2() != 1.0) throw std::invalid_argument("stieltjes: closed form requires sigma2 = 1");
  const double y = law.y();
  const Complex z = zp.z();
  const Complex root = std::sqrt((z - 1.0 - y) * (z - 1.0 - y) - 4.0 * y);
  Complex s = (1.0 - y - z + root) / (2.0 * y * z);
  if (!(s.imag() > 0.0)) s = (1.0 - y - z - root) / (2.0 * y * z);
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "stieltjes: overflow at y = %.6g", y);
    throw NumericalError(buf);
  }
  if (!(s.imag() > 0.0))
    throw NumericalError("stieltjes: no root in the upper half-plane at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  return s;
}

double smoothing_modulus(const MPLaw& law, double v) {
  if (law.y() > 1.0) throw std::invalid_argument("smoothing_modulus: requires y <= 1");
  if (!(v > 0.0)) throw std::invalid_argument("smoothing_modulus: requires v > 0");
  return 2.0 * v / (law.y() * (std::sqrt(law.lower_edge()) + std::sqrt(v)));
}

double modulus_window_integral(const MPLaw& law, double h) {
  if (law.y() > 1.0) throw std::invalid_argument("modulus_window_integral: requires y <= 1");
  if (!(h > 0.0)) return 0.0;
  // With s = t^2 the integrand 2 g(t^2) t = 4 t^3 / (y (sqrt(a) + t)) is smooth at 0 even when a = 0.
  const double c = std::sqrt(law.lower_edge());
  auto f = [&](double t) { return 4.0 * t * t * t / (law.y() * (c + t)); };
  return 2.0 * integrate(f, 0.0, std::sqrt(h), 1e-12, 1e-300, "smoothing modulus integral");
}

double window_increment_bound(const MPLaw& law, double v) {
  const double y = law.y();
  const auto sc = smoothing_scale(law, v);
  return 11.0 * std::sqrt(2.0 * (1.0 + y)) / (3.0 * std::numbers::pi * y) * v * v / sc.v_y;
}

double stieltjes_modulus_bound(const MPLaw& law, double v) {
  return std::numbers::sqrt2 / (std::sqrt(law.y()) * smoothing_scale(law, v).v_y);
}

}  // namespace qmp
