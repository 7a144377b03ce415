#pragma once

#include <optional>
#include <span>

#include "qmp/complex_matrix.hpp"
#include "qmp/mp_law.hpp"
#include "qmp/spectra.hpp"

namespace qmp {

/// (1/N) sum_j 1 / (lambda_j - z).
Complex empirical_stieltjes(const Spectrum& s, const UpperHalfPoint& z);

/// Same for an arbitrary step CDF, summing jump masses exactly.
Complex empirical_stieltjes(const StepCDF& f, const UpperHalfPoint& z);

/// Mean of the per-replication transforms, summed in index order.
Complex mean_stieltjes(std::span<const Spectrum> spectra, const UpperHalfPoint& z);

/// Residual delta = m - 1 / (1 - z - y - y z m) of the self-consistency
/// equation. Throws NumericalError when the denominator vanishes.
Complex delta_residual(Complex sp_mean, const UpperHalfPoint& z, double y_p);

/// Root m of  y z m^2 - ((1-z-y) + y z delta) m + (1 + delta (1-z-y)) = 0
/// lying in the upper half-plane. When both roots do, the one continuing the
/// delta = 0 solution (nearest the Marchenko–Pastur transform) is returned.
/// Throws NumericalError when neither root has positive imaginary part.
Complex solve_fixed_point(const UpperHalfPoint& z, double y_p, Complex delta);

struct FixedPointDiagnostics {
  UpperHalfPoint z{0.0, 1.0};
  Complex sp_mean;
  Complex delta_n;
  Complex b_n;       // 1 / (z + y - 1 + y z m)
  double v_y = 0.0;  // sqrt(a_n) + sqrt(v)
  double delta_threshold = 0.0;  // v / (v_y * 10 (A+1)^2)
  double b_bound = 0.0;          // 2 / sqrt(y |z|)
  bool leb_condition = false;    // |delta| <= delta_threshold
  bool leb_bound_holds = false;  // |b_n| <= b_bound
};

/// `bai_A` defaults to the A of make_constants for the law's upper edge.
FixedPointDiagnostics diagnostics(Complex sp_mean, const UpperHalfPoint& z, double y_p,
                                  std::optional<double> bai_A = std::nullopt);

}  // namespace qmp
