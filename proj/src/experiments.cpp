#include "qmp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

#include "qmp/eigensolver.hpp"
#include "qmp/errors.hpp"
#include "qmp/fixed_point.hpp"

namespace qmp {

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. The exception
// from the lowest failing index is rethrown, independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(y_target > 0.0) || !std::isfinite(y_target)) throw ConfigError("y must be > 0");
  if (n_grid.empty()) throw ConfigError("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw ConfigError("n_grid entries must be >= 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
    if (p_for(n_grid[i]) < 1)
      throw ConfigError("round(y * n) must be >= 1 for n = " + std::to_string(n_grid[i]));
  }
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (fixed_v && !(*fixed_v > 0.0)) throw ConfigError("v must be > 0");
}

std::size_t ExperimentConfig::p_for(std::size_t n) const {
  return static_cast<std::size_t>(std::llround(y_target * static_cast<double>(n)));
}

double ExperimentConfig::v_for(std::size_t n) const {
  return fixed_v ? *fixed_v : std::pow(static_cast<double>(n), -0.4);
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> required{"distribution", "y", "n_grid", "replications", "seed"};
  static const std::vector<std::string> optional{"v", "out", "threads"};
  for (const auto& k : required)
    if (!j.contains(k)) throw ConfigError("config: missing required key '" + k + "'");
  for (const auto& item : j.items())
    if (std::find(required.begin(), required.end(), item.key()) == required.end() &&
        std::find(optional.begin(), optional.end(), item.key()) == optional.end())
      throw ConfigError("config: unknown key '" + item.key() + "'");
  ExperimentConfig c;
  try {
    if (j.contains("distribution")) c.distribution = parse_entry_kind(j.at("distribution").get<std::string>());
    if (j.contains("y")) c.y_target = j.at("y").get<double>();
    if (j.contains("n_grid")) {
      c.n_grid.clear();
      for (const auto& v : j.at("n_grid")) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
          throw ConfigError("n_grid entries must be positive integers");
        c.n_grid.push_back(v.get<std::size_t>());
      }
    }
    if (j.contains("replications")) {
      const auto& r = j.at("replications");
      if (!r.is_number_integer() || r.get<long long>() < 1)
        throw ConfigError("replications must be a positive integer");
      c.replications = r.get<std::size_t>();
    }
    if (j.contains("seed")) {
      const auto& s = j.at("seed");
      if (!s.is_number_integer()) throw ConfigError("seed must be an integer");
      c.master_seed = s.is_number_unsigned() ? s.get<std::uint64_t>()
                                             : static_cast<std::uint64_t>(s.get<std::int64_t>());
    }
    if (j.contains("v")) {
      const auto& v = j.at("v");
      if (v.is_string()) {
        if (v.get<std::string>() != "auto") throw ConfigError("v must be a number or \"auto\"");
      } else {
        c.fixed_v = v.get<double>();
      }
    }
    if (j.contains("out")) c.output_path = j.at("out").get<std::string>();
    if (j.contains("threads")) c.threads = std::max(1U, j.at("threads").get<unsigned>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["distribution"] = std::string(to_string(distribution));
  j["y"] = y_target;
  j["n_grid"] = n_grid;
  j["replications"] = replications;
  j["seed"] = master_seed;
  if (fixed_v)
    j["v"] = *fixed_v;
  else
    j["v"] = "auto";
  j["out"] = output_path;
  return j;
}

std::uint64_t replication_seed(std::uint64_t master, std::size_t n, std::size_t rep) noexcept {
  return stream_seed(master, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
}

Spectrum replicate_spectrum(std::size_t p, std::size_t n, const EntryDistribution& dist,
                            std::uint64_t seed) {
  const auto x = sample_matrix(p, n, dist, seed);
  const auto pre = preprocess(x, n, dist);
  return covariance_spectrum(sample_covariance(pre.matrix));
}

std::vector<Spectrum> simulate_spectra(const ExperimentConfig& cfg, std::size_t n) {
  const std::size_t p = cfg.p_for(n);
  const auto dist = EntryDistribution::of(cfg.distribution);
  std::vector<Spectrum> out(cfg.replications);
  parallel_for(cfg.replications, cfg.threads, [&](std::size_t r) {
    const auto seed = replication_seed(cfg.master_seed, n, r);
    try {
      out[r] = replicate_spectrum(p, n, dist, seed);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " [n=" + std::to_string(n) +
                           ", p=" + std::to_string(p) + ", replication=" + std::to_string(r) +
                           ", seed=" + std::to_string(seed) + "]");
    }
  });
  return out;
}

double expected_esd_rate(std::size_t n, double a_n) {
  const double nn = static_cast<double>(n);
  return a_n > std::pow(nn, -0.4) ? std::pow(nn, -0.5) * std::pow(a_n, -0.75) : std::pow(nn, -0.2);
}

double in_probability_rate(std::size_t n, double a_n) {
  const double nn = static_cast<double>(n);
  return a_n < std::pow(nn, -0.4) ? std::pow(nn, -0.2) : std::pow(nn, -0.4) * std::pow(a_n, -0.4);
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& values) {
  if (xs.size() != values.size() || xs.size() < 2) return std::nan("");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(values[i]));
  }
  const double mx = mean_of(lx);
  const double my = mean_of(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

RateReport rate_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  RateReport rep;
  std::vector<double> ns, means, pooled;
  for (std::size_t n : cfg.n_grid) {
    const auto spectra = simulate_spectra(cfg, n);
    RateRow row;
    row.n = n;
    row.p = cfg.p_for(n);
    row.y_p = static_cast<double>(row.p) / static_cast<double>(n);
    row.a_n = std::pow(1.0 - std::sqrt(row.y_p), 2);
    const MPLaw law(row.y_p);
    const auto ref = reference_cdf(law);

    std::vector<double> ks(spectra.size());
    for (std::size_t r = 0; r < spectra.size(); ++r) ks[r] = kolmogorov_distance(esd(spectra[r]), ref);
    row.mean_ks = mean_of(ks);
    row.ks_std = std::sqrt(sample_variance(ks));
    row.pooled_ks = kolmogorov_distance(pooled_esd(spectra), ref);
    row.bound_thm1 = expected_esd_rate(n, row.a_n);
    row.bound_thm2 = in_probability_rate(n, row.a_n);

    const double slack = 2.0 / std::sqrt(static_cast<double>(cfg.replications * 2 * row.p));
    if (row.pooled_ks > row.mean_ks + slack) rep.pooled_ordering_violations.push_back(n);

    ns.push_back(static_cast<double>(n));
    means.push_back(row.mean_ks);
    pooled.push_back(row.pooled_ks);
    rep.rows.push_back(row);
  }
  rep.slope_mean_ks = loglog_slope(ns, means);
  rep.slope_pooled_ks = loglog_slope(ns, pooled);
  return rep;
}

VarianceReport variance_scaling(const ExperimentConfig& cfg, const UpperHalfPoint& z) {
  cfg.validate();
  if (cfg.replications < 2) throw ConfigError("variance scaling needs at least 2 replications");
  const double nmax = static_cast<double>(cfg.n_grid.back());
  if (!(z.v() > 1.0 / std::sqrt(nmax)))
    throw ConfigError("variance scaling requires v > n^{-1/2} at the largest n");
  VarianceReport rep;
  rep.z = z;
  std::vector<double> ns, vre, vim;
  for (std::size_t n : cfg.n_grid) {
    const auto spectra = simulate_spectra(cfg, n);
    std::vector<double> re(spectra.size()), im(spectra.size());
    for (std::size_t r = 0; r < spectra.size(); ++r) {
      const Complex s = empirical_stieltjes(spectra[r], z);
      re[r] = s.real();
      im[r] = s.imag();
    }
    VarianceRow row;
    row.n = n;
    row.p = cfg.p_for(n);
    row.mean = Complex(mean_of(re), mean_of(im));
    row.var_re = sample_variance(re);
    row.var_im = sample_variance(im);
    row.low_confidence = cfg.replications < 10;
    rep.rows.push_back(row);
    ns.push_back(static_cast<double>(n));
    vre.push_back(row.var_re);
    vim.push_back(row.var_im);
  }
  rep.slope_re = loglog_slope(ns, vre);
  rep.slope_im = loglog_slope(ns, vim);
  return rep;
}

std::vector<LambdaMaxRow> lambda_max_check(const ExperimentConfig& cfg, double margin) {
  cfg.validate();
  if (!(margin >= 0.0)) throw ConfigError("margin must be >= 0");
  std::vector<LambdaMaxRow> rows;
  for (std::size_t n : cfg.n_grid) {
    const auto spectra = simulate_spectra(cfg, n);
    LambdaMaxRow row;
    row.n = n;
    row.p = cfg.p_for(n);
    row.y_p = static_cast<double>(row.p) / static_cast<double>(n);
    row.threshold = std::pow(1.0 + std::sqrt(row.y_p), 2) + margin;
    for (const auto& s : spectra) {
      row.lambda_max.push_back(s.max());
      row.max_lambda = std::max(row.max_lambda, s.max());
      if (s.max() > row.threshold) ++row.exceedances;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ReflectionReport reflection_check(const QuaternionMatrix& x) {
  const std::size_t p = x.rows();
  const std::size_t n = x.cols();
  if (!(p > n)) throw std::invalid_argument("reflection_check: requires p > n");
  const double y = static_cast<double>(p) / static_cast<double>(n);

  const Spectrum s = covariance_spectrum(sample_covariance(x));
  ComplexMatrix companion = gram(embed_matrix(x.adjoint()));
  for (auto& z : companion.data()) z /= static_cast<double>(n);
  const Spectrum c = covariance_spectrum(companion);

  ReflectionReport rep;
  rep.p = p;
  rep.n = n;
  rep.expected_zero_count = 2 * (p - n);
  rep.zero_count = static_cast<std::size_t>(
      std::count(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0));

  const double top = std::max(s.max(), c.max());
  const std::size_t offset = s.dimension() - c.dimension();
  for (std::size_t i = 0; i < c.dimension(); ++i)
    rep.nonzero_deviation = std::max(
        rep.nonzero_deviation, std::abs(s.eigenvalues[offset + i] - c.eigenvalues[i]) / top);

  // W = X^*X / p has eigenvalues c / y.
  Spectrum w = c;
  for (auto& l : w.eigenvalues) l /= y;
  const StepCDF fs = esd(s);
  const StepCDF gw = esd(w);
  auto rhs = [&](double t) { return gw(t / y) / y + (t >= 0.0 ? 1.0 - 1.0 / y : 0.0); };

  std::vector<double> pts = fs.jump_points;
  for (double g : gw.jump_points) pts.push_back(g * y);
  pts.push_back(0.0);
  std::sort(pts.begin(), pts.end());
  // Breakpoints that agree up to rounding form one cluster; both sides are
  // compared strictly between clusters and beyond the last one.
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::abs(b)); };
  std::vector<double> probes{pts.front() - 1.0, pts.back() + 1.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!close(pts[i], pts[i + 1])) probes.push_back(0.5 * (pts[i] + pts[i + 1]));
  for (double t : probes) rep.identity_deviation = std::max(rep.identity_deviation, std::abs(fs(t) - rhs(t)));
  return rep;
}

}  // namespace qmp
