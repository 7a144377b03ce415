#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmp/mp_law.hpp"
#include "qmp/quaternion.hpp"
#include "qmp/sampling.hpp"
#include "qmp/spectra.hpp"

namespace qmp {

struct ExperimentConfig {
  EntryKind distribution = EntryKind::q_gaussian;
  double y_target = 0.25;
  std::vector<std::size_t> n_grid{100};
  std::size_t replications = 1;
  std::uint64_t master_seed = 0;
  std::optional<double> fixed_v;  // nullopt: v = n^{-2/5}
  std::string output_path;
  unsigned threads = 1;  // replication workers; results do not depend on it

  /// Throws ConfigError when an invariant fails.
  void validate() const;
  std::size_t p_for(std::size_t n) const;
  double v_for(std::size_t n) const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Seed of replication `rep` at sample size n.
std::uint64_t replication_seed(std::uint64_t master, std::size_t n, std::size_t rep) noexcept;

/// sample -> preprocess -> covariance -> spectrum for one replication.
Spectrum replicate_spectrum(std::size_t p, std::size_t n, const EntryDistribution& dist,
                            std::uint64_t seed);

/// All replications at one n, computed on cfg.threads workers and returned in
/// replication order. Numerical failures are rethrown with (n, replication, seed).
std::vector<Spectrum> simulate_spectra(const ExperimentConfig& cfg, std::size_t n);

/// Pooled-distance envelope: n^{-1/2} a_n^{-3/4} if a_n > n^{-2/5}, else n^{-1/5}.
double expected_esd_rate(std::size_t n, double a_n);
/// Per-replication envelope: n^{-1/5} if a_n < n^{-2/5}, else n^{-2/5} a_n^{-2/5}.
double in_probability_rate(std::size_t n, double a_n);

/// Least-squares slope of log(values) against log(xs).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& values);

struct RateRow {
  std::size_t n = 0;
  std::size_t p = 0;
  double y_p = 0.0;
  double a_n = 0.0;
  double mean_ks = 0.0;
  double ks_std = 0.0;
  double pooled_ks = 0.0;
  double bound_thm1 = 0.0;
  double bound_thm2 = 0.0;
};

struct RateReport {
  std::vector<RateRow> rows;
  double slope_mean_ks = 0.0;
  double slope_pooled_ks = 0.0;
  /// Rows where pooled_ks > mean_ks + 2 / sqrt(R * 2p).
  std::vector<std::size_t> pooled_ordering_violations;
};

RateReport rate_sweep(const ExperimentConfig& cfg);

struct VarianceRow {
  std::size_t n = 0;
  std::size_t p = 0;
  Complex mean;  // mean of s_p(z) over replications
  double var_re = 0.0;
  double var_im = 0.0;
  bool low_confidence = false;  // fewer than 10 replications
};

struct VarianceReport {
  UpperHalfPoint z{0.0, 1.0};
  std::vector<VarianceRow> rows;
  double slope_re = 0.0;
  double slope_im = 0.0;
};

/// Sample variance of Re/Im s_p(z) across replications at each n.
/// Requires replications >= 2 and v > n^{-1/2} at the largest n.
VarianceReport variance_scaling(const ExperimentConfig& cfg, const UpperHalfPoint& z);

struct LambdaMaxRow {
  std::size_t n = 0;
  std::size_t p = 0;
  double y_p = 0.0;
  double max_lambda = 0.0;  // over replications
  double threshold = 0.0;   // (1 + sqrt(y_p))^2 + margin
  std::size_t exceedances = 0;
  std::vector<double> lambda_max;  // per replication
};

std::vector<LambdaMaxRow> lambda_max_check(const ExperimentConfig& cfg, double margin);

struct ReflectionReport {
  std::size_t p = 0;
  std::size_t n = 0;
  /// sup_x |F^S(x) - [G(x/y)/y + (1 - 1/y) I(x >= 0)]|, G the ESD of X^*X / p.
  double identity_deviation = 0.0;
  /// max relative gap between the 2n nonzero eigenvalues of XX^*/n and those of X^*X/n.
  double nonzero_deviation = 0.0;
  std::size_t zero_count = 0;
  std::size_t expected_zero_count = 0;  // 2(p - n)
};

/// Throws std::invalid_argument unless p > n.
ReflectionReport reflection_check(const QuaternionMatrix& x);

}  // namespace qmp
