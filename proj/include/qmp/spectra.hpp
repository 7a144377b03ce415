#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qmp {

/// Eigenvalues of a Hermitian matrix, ascending.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t dimension() const noexcept { return eigenvalues.size(); }
  double max() const { return eigenvalues.back(); }
  double min() const { return eigenvalues.front(); }
};

/// Right-continuous step CDF: F(x) = cumulative_weights[j] for
/// jump_points[j] <= x < jump_points[j+1], and 0 left of the first jump.
struct StepCDF {
  std::vector<double> jump_points;
  std::vector<double> cumulative_weights;

  double operator()(double x) const;
  /// F(x-), the left limit.
  double left_limit(double x) const;
  /// Mass at jump j.
  double jump_mass(std::size_t j) const;
};

/// A reference distribution: its CDF plus the locations of any atoms, where
/// the left limit differs from the value.
struct ReferenceCdf {
  std::function<double(double)> cdf;
  std::vector<double> atoms;
  std::function<double(double)> left_limit;  // used only at atoms; null means continuous
};

/// F(x) = (1/N) #{lambda_j <= x}. Throws std::invalid_argument for an empty spectrum.
StepCDF esd(const Spectrum& s);

/// ESD of the union of several spectra, each weighted 1/R; equals the average
/// of the individual ESDs when all share a dimension.
StepCDF pooled_esd(std::span<const Spectrum> spectra);

/// sup_x |F(x) - G(x)| evaluated exactly at jump points (and G's atoms).
double kolmogorov_distance(const StepCDF& f, const ReferenceCdf& g);

/// sup_x |F(x) - G(x)| between two step CDFs.
double kolmogorov_distance(const StepCDF& f, const StepCDF& g);

/// Levy distance: inf{eps : F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x},
/// bisection to 1e-9 absolute.
double levy_distance(const StepCDF& f, const StepCDF& g);

/// Whether eps satisfies both Levy band inequalities.
bool levy_band_holds(const StepCDF& f, const StepCDF& g, double eps);

/// Largest |lambda_{2k+1} - lambda_{2k}| / (1 + |lambda_{2k+1}|) over consecutive pairs.
double pairing_defect(const Spectrum& s);

}  // namespace qmp
