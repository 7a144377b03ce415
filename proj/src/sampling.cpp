#include "qmp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "qmp/errors.hpp"
#include "qmp/quadrature.hpp"

namespace qmp {

namespace {

constexpr double kHalfWidth = 0.8660254037844386;  // sqrt(3)/2, uniform coefficient support

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Area and second moment |u|^2 of [0,h]^2 ∩ {u^2 + w^2 < s}.
struct QuarterDisk {
  double area;
  double second;
};

QuarterDisk quarter_disk(double s, double h) {
  if (s <= 0.0) return {0.0, 0.0};
  const double h2 = h * h;
  if (s >= 2.0 * h2) return {h2, 2.0 * h2 * h2 / 3.0};
  if (s <= h2) return {std::numbers::pi * s / 4.0, std::numbers::pi * s * s / 8.0};
  const double r = std::sqrt(s);
  const double theta0 = std::acos(h / r);
  const double t = std::tan(theta0);
  const double open = std::numbers::pi / 2.0 - 2.0 * theta0;
  return {0.5 * s * open + h2 * t, 0.25 * s * s * open + 0.5 * h2 * h2 * (t + t * t * t / 3.0)};
}

// d(area)/ds of the quarter disk.
double quarter_disk_density(double s, double h) {
  const double h2 = h * h;
  if (s <= 0.0 || s >= 2.0 * h2) return 0.0;
  if (s <= h2) return std::numbers::pi / 4.0;
  return 0.5 * (std::numbers::pi / 2.0 - 2.0 * std::acos(h / std::sqrt(s)));
}

// E|x|^2 I(|x| < tau) for four independent U[-h, h] coefficients. The squared
// norm splits into two independent planar parts; the outer one is integrated
// numerically against the closed-form inner quarter-disk moments.
double bounded_truncated_second_moment(double tau) {
  const double h = kHalfWidth;
  const double h2 = h * h;
  const double t2 = tau * tau;
  if (t2 >= 4.0 * h2) return 1.0;
  auto integrand = [&](double s) {
    const auto inner = quarter_disk(t2 - s, h);
    return quarter_disk_density(s, h) * (s * inner.area + inner.second);
  };
  const double upper = std::min(2.0 * h2, t2);
  std::vector<double> cuts{0.0, upper};
  for (double c : {h2, t2 - h2, t2 - 2.0 * h2})
    if (c > 0.0 && c < upper) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate(integrand, cuts[i], cuts[i + 1], 1e-12, 1e-15, "bounded-mix moment");
  return total / (h2 * h2);
}

}  // namespace

std::string_view to_string(EntryKind kind) noexcept {
  switch (kind) {
    case EntryKind::q_gaussian: return "q_gaussian";
    case EntryKind::q_rademacher: return "q_rademacher";
    case EntryKind::q_bounded_mix: return "q_bounded_mix";
  }
  return "unknown";
}

EntryKind parse_entry_kind(std::string_view name) {
  if (name == "q_gaussian") return EntryKind::q_gaussian;
  if (name == "q_rademacher") return EntryKind::q_rademacher;
  if (name == "q_bounded_mix") return EntryKind::q_bounded_mix;
  throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

EntryDistribution EntryDistribution::of(EntryKind kind) {
  switch (kind) {
    case EntryKind::q_gaussian:
      // |x|^2 = chi^2_4 / 4, E (chi^2_4)^3 = 4*6*8
      return {kind, 192.0 / 64.0};
    case EntryKind::q_rademacher:
      return {kind, 1.0};
    case EntryKind::q_bounded_mix: {
      // U = c^2 with E U = 1/4, E U^2 = 9/80, E U^3 = 27/448
      const double m1 = 0.25, m2 = 9.0 / 80.0, m3 = 27.0 / 448.0;
      return {kind, 4.0 * m3 + 36.0 * m2 * m1 + 24.0 * m1 * m1 * m1};
    }
  }
  throw std::invalid_argument("unknown entry kind");
}

std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = splitmix64(master);
  for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

Quaternion EntrySampler::draw() {
  switch (dist_.kind) {
    case EntryKind::q_gaussian:
      return {normal_(engine_), normal_(engine_), normal_(engine_), normal_(engine_)};
    case EntryKind::q_rademacher: {
      const auto bits = engine_();
      auto coef = [&](int i) { return ((bits >> (63 - i)) & 1U) ? 0.5 : -0.5; };
      return {coef(0), coef(1), coef(2), coef(3)};
    }
    case EntryKind::q_bounded_mix: {
      auto u = [&] { return kHalfWidth * (2.0 * uniform_(engine_) - 1.0); };
      const double a = u(), b = u(), c = u(), d = u();
      return {a, b, c, d};
    }
  }
  return {};
}

QuaternionMatrix sample_matrix(std::size_t p, std::size_t n, const EntryDistribution& dist,
                               std::uint64_t seed) {
  if (p == 0 || n == 0) throw std::invalid_argument("sample_matrix: dimensions must be >= 1");
  QuaternionMatrix x(p, n);
  EntrySampler sampler(dist, seed);
  for (auto& e : x.entries()) e = sampler.draw();
  return x;
}

TruncatedMoments truncated_moments(const EntryDistribution& dist, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("truncated_moments: threshold must be > 0");
  // All kinds are symmetric under x -> -x and the indicator depends on |x| only,
  // so the truncated mean vanishes.
  switch (dist.kind) {
    case EntryKind::q_rademacher:
      return {Quaternion::zero(), 1.0 < threshold ? 1.0 : 0.0};
    case EntryKind::q_gaussian:
      // E[chi^2_4/4 ; chi^2_4 < 4 t^2] = P(chi^2_6 < 4 t^2)
      return {Quaternion::zero(), boost::math::gamma_p(3.0, 2.0 * threshold * threshold)};
    case EntryKind::q_bounded_mix:
      return {Quaternion::zero(), bounded_truncated_second_moment(threshold)};
  }
  throw std::invalid_argument("truncated_moments: distribution without truncated moments");
}

double PreprocessReport::sigma_min() const {
  double s = 1.0;
  for (double f : rescale_factors) s = std::min(s, 1.0 / f);
  return s;
}

PreprocessResult preprocess(const QuaternionMatrix& x, std::size_t n, const EntryDistribution& dist) {
  if (n != x.cols()) throw std::invalid_argument("preprocess: n must equal the column count");
  const double threshold = std::pow(static_cast<double>(n), 0.25);
  const auto moments = truncated_moments(dist, threshold);
  const double variance = moments.second_moment - moments.mean.norm_squared();
  if (!(variance > 0.0))
    throw std::invalid_argument("preprocess: truncated entry has zero variance (n too small)");
  const double sigma = std::min(1.0, std::sqrt(variance));
  const double inv_sigma = 1.0 / sigma;

  PreprocessResult out{QuaternionMatrix(x.rows(), x.cols()), {}};
  auto& rep = out.report;
  rep.truncation_threshold = threshold;
  rep.recentering_shift = moments.mean;
  rep.rows = x.rows();
  rep.cols = x.cols();
  rep.rescale_factors.assign(x.rows() * x.cols(), inv_sigma);

  const auto& src = x.entries();
  auto& dst = out.matrix.entries();
  for (std::size_t i = 0; i < src.size(); ++i) {
    Quaternion e = src[i];
    if (!(e.norm() < threshold)) {
      e = Quaternion::zero();
      ++rep.truncated_count;
    }
    e = e - moments.mean;
    dst[i] = inv_sigma == 1.0 ? e : inv_sigma * e;
  }
  return out;
}

ComplexMatrix sample_covariance(const QuaternionMatrix& x) {
  ComplexMatrix h = gram(embed_matrix(x));
  const double inv_n = 1.0 / static_cast<double>(x.cols());
  for (auto& z : h.data()) z *= inv_n;
  return h;
}

}  // namespace qmp
