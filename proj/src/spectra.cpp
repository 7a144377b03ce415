#include "qmp/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmp {

double StepCDF::operator()(double x) const {
  const auto it = std::upper_bound(jump_points.begin(), jump_points.end(), x);
  const auto idx = static_cast<std::size_t>(it - jump_points.begin());
  return idx == 0 ? 0.0 : cumulative_weights[idx - 1];
}

double StepCDF::left_limit(double x) const {
  const auto it = std::lower_bound(jump_points.begin(), jump_points.end(), x);
  const auto idx = static_cast<std::size_t>(it - jump_points.begin());
  return idx == 0 ? 0.0 : cumulative_weights[idx - 1];
}

double StepCDF::jump_mass(std::size_t j) const {
  return cumulative_weights[j] - (j == 0 ? 0.0 : cumulative_weights[j - 1]);
}

namespace {

struct Weighted {
  double x;
  double w;
};

StepCDF from_weighted(std::vector<Weighted> pts) {
  std::sort(pts.begin(), pts.end(), [](const Weighted& a, const Weighted& b) { return a.x < b.x; });
  StepCDF f;
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    acc += pts[i].w;
    if (i + 1 < pts.size() && pts[i + 1].x == pts[i].x) continue;
    f.jump_points.push_back(pts[i].x);
    f.cumulative_weights.push_back(acc);
  }
  f.cumulative_weights.back() = 1.0;
  return f;
}

}  // namespace

StepCDF esd(const Spectrum& s) {
  if (s.eigenvalues.empty()) throw std::invalid_argument("esd: empty spectrum");
  const double w = 1.0 / static_cast<double>(s.dimension());
  std::vector<Weighted> pts;
  pts.reserve(s.dimension());
  for (double l : s.eigenvalues) pts.push_back({l, w});
  return from_weighted(std::move(pts));
}

StepCDF pooled_esd(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw std::invalid_argument("pooled_esd: no spectra");
  const double r = static_cast<double>(spectra.size());
  std::vector<Weighted> pts;
  for (const auto& s : spectra) {
    if (s.eigenvalues.empty()) throw std::invalid_argument("pooled_esd: empty spectrum");
    const double w = 1.0 / (r * static_cast<double>(s.dimension()));
    for (double l : s.eigenvalues) pts.push_back({l, w});
  }
  return from_weighted(std::move(pts));
}

double kolmogorov_distance(const StepCDF& f, const ReferenceCdf& g) {
  auto is_atom = [&](double x) {
    return g.left_limit && std::find(g.atoms.begin(), g.atoms.end(), x) != g.atoms.end();
  };
  double dist = 0.0;
  double prev = 0.0;
  for (std::size_t j = 0; j < f.jump_points.size(); ++j) {
    const double x = f.jump_points[j];
    const double gx = g.cdf(x);
    const double gl = is_atom(x) ? g.left_limit(x) : gx;
    dist = std::max({dist, std::abs(gx - f.cumulative_weights[j]), std::abs(gl - prev)});
    prev = f.cumulative_weights[j];
  }
  if (g.left_limit) {
    for (double a : g.atoms) {
      dist = std::max({dist, std::abs(g.cdf(a) - f(a)), std::abs(g.left_limit(a) - f.left_limit(a))});
    }
  }
  return dist;
}

double kolmogorov_distance(const StepCDF& f, const StepCDF& g) {
  double dist = 0.0;
  for (double x : f.jump_points) dist = std::max(dist, std::abs(f(x) - g(x)));
  for (double x : g.jump_points) dist = std::max(dist, std::abs(f(x) - g(x)));
  return dist;
}

bool levy_band_holds(const StepCDF& f, const StepCDF& g, double eps) {
  constexpr double slack = 1e-12;
  // F(x - eps) - eps <= G(x): both sides right-continuous, so checking at
  // every breakpoint of the pair covers each constancy interval.
  for (std::size_t j = 0; j < f.jump_points.size(); ++j)
    if (f.cumulative_weights[j] - eps > g(f.jump_points[j] + eps) + slack) return false;
  for (double x : g.jump_points)
    if (f(x - eps) - eps > g(x) + slack) return false;
  // G(x) <= F(x + eps) + eps
  for (std::size_t j = 0; j < f.jump_points.size(); ++j) {
    if (g(f.jump_points[j] - eps) > f.cumulative_weights[j] + eps + slack) return false;
  }
  for (double x : g.jump_points)
    if (g(x) > f(x + eps) + eps + slack) return false;
  return true;
}

double levy_distance(const StepCDF& f, const StepCDF& g) {
  if (levy_band_holds(f, g, 0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (levy_band_holds(f, g, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double pairing_defect(const Spectrum& s) {
  if (s.dimension() % 2 != 0) throw std::invalid_argument("pairing_defect: odd dimension");
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < s.dimension(); k += 2) {
    const double hi = s.eigenvalues[k + 1];
    worst = std::max(worst, std::abs(hi - s.eigenvalues[k]) / (1.0 + std::abs(hi)));
  }
  return worst;
}

}  // namespace qmp
