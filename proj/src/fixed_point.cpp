#include "qmp/fixed_point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qmp/bai_bound.hpp"
#include "qmp/errors.hpp"

namespace qmp {

Complex empirical_stieltjes(const Spectrum& s, const UpperHalfPoint& zp) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("empirical_stieltjes: empty spectrum");
  const Complex z = zp.z();
  Complex acc = 0.0;
  for (double l : s.eigenvalues) acc += 1.0 / (l - z);
  return acc / static_cast<double>(s.dimension());
}

Complex empirical_stieltjes(const StepCDF& f, const UpperHalfPoint& zp) {
  const Complex z = zp.z();
  Complex acc = 0.0;
  for (std::size_t j = 0; j < f.jump_points.size(); ++j)
    acc += f.jump_mass(j) / (f.jump_points[j] - z);
  return acc;
}

Complex mean_stieltjes(std::span<const Spectrum> spectra, const UpperHalfPoint& z) {
  if (spectra.empty()) throw std::invalid_argument("mean_stieltjes: no spectra");
  Complex acc = 0.0;
  for (const auto& s : spectra) acc += empirical_stieltjes(s, z);
  return acc / static_cast<double>(spectra.size());
}

Complex delta_residual(Complex sp_mean, const UpperHalfPoint& zp, double y_p) {
  const Complex z = zp.z();
  const Complex denom = 1.0 - z - y_p - y_p * z * sp_mean;
  if (std::abs(denom) == 0.0)
    throw NumericalError("delta_residual: vanishing denominator at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  return sp_mean - 1.0 / denom;
}

Complex solve_fixed_point(const UpperHalfPoint& zp, double y_p, Complex delta) {
  if (!(y_p > 0.0)) throw std::invalid_argument("solve_fixed_point: y_p must be > 0");
  const Complex z = zp.z();
  const Complex c = 1.0 - z - y_p;
  const Complex qa = y_p * z;
  const Complex qb = -(c + y_p * z * delta);
  const Complex qc = 1.0 + delta * c;
  const Complex disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  // Numerically stable pair: one root from the quadratic formula with the
  // sign avoiding cancellation, the other from the product of roots.
  const Complex q = -0.5 * (qb + (std::real(std::conj(qb) * disc) >= 0.0 ? disc : -disc));
  const Complex r1 = q / qa;
  const Complex r2 = q == 0.0 ? -qb / qa - r1 : qc / q;
  const bool up1 = r1.imag() > 0.0;
  const bool up2 = r2.imag() > 0.0;
  if (up1 && !up2) return r1;
  if (up2 && !up1) return r2;
  if (!up1 && !up2)
    throw NumericalError("solve_fixed_point: both roots outside the upper half-plane at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  const Complex mp = stieltjes(MPLaw(y_p), zp);
  return std::abs(r1 - mp) <= std::abs(r2 - mp) ? r1 : r2;
}

FixedPointDiagnostics diagnostics(Complex sp_mean, const UpperHalfPoint& zp, double y_p,
                                  std::optional<double> bai_A) {
  const MPLaw law(y_p);
  const double A = bai_A ? *bai_A : make_constants(law.upper_edge()).A;
  if (!(A > 0.0)) throw std::invalid_argument("diagnostics: A must be > 0");
  const Complex z = zp.z();
  FixedPointDiagnostics d;
  d.z = zp;
  d.sp_mean = sp_mean;
  d.delta_n = delta_residual(sp_mean, zp, y_p);
  d.b_n = 1.0 / (z + y_p - 1.0 + y_p * z * sp_mean);
  d.v_y = smoothing_scale(law, zp.v()).v_y;
  d.delta_threshold = zp.v() / (d.v_y * 10.0 * (A + 1.0) * (A + 1.0));
  d.b_bound = 2.0 / std::sqrt(y_p * std::abs(z));
  d.leb_condition = std::abs(d.delta_n) <= d.delta_threshold;
  d.leb_bound_holds = std::abs(d.b_n) <= d.b_bound;
  return d;
}

}  // namespace qmp
