#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "qmp/complex_matrix.hpp"
#include "qmp/quaternion.hpp"

namespace qmp {

enum class EntryKind { q_gaussian, q_rademacher, q_bounded_mix };

std::string_view to_string(EntryKind kind) noexcept;
/// Throws ConfigError for unknown names.
EntryKind parse_entry_kind(std::string_view name);

/// Law of one quaternion entry. Every kind has mean zero and E|x|^2 = 1; the
/// four coefficients are independent with variance 1/4 each.
struct EntryDistribution {
  EntryKind kind = EntryKind::q_gaussian;
  double sixth_moment_bound = 0.0;  // E|x|^6, exact for each kind

  static EntryDistribution of(EntryKind kind);
};

/// Deterministic 64-bit seed for a sub-stream, e.g. stream_seed(master, {n, rep}).
/// Built from splitmix64 finalizers so neighbouring keys give unrelated streams.
std::uint64_t stream_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept;

class EntrySampler {
 public:
  EntrySampler(EntryDistribution dist, std::uint64_t seed) : dist_(dist), engine_(seed) {}

  Quaternion draw();

 private:
  EntryDistribution dist_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 0.5};
  std::uniform_real_distribution<double> uniform_;
};

/// p x n matrix of i.i.d. entries; a pure function of its arguments.
QuaternionMatrix sample_matrix(std::size_t p, std::size_t n, const EntryDistribution& dist,
                               std::uint64_t seed);

/// Analytic moments of x·I(|x| < threshold).
struct TruncatedMoments {
  Quaternion mean;
  double second_moment = 0.0;  // E|x|^2 I(|x| < threshold)
};

TruncatedMoments truncated_moments(const EntryDistribution& dist, double threshold);

struct PreprocessReport {
  double truncation_threshold = 0.0;  // n^{1/4}
  std::size_t truncated_count = 0;    // entries with |x| >= threshold
  Quaternion recentering_shift;       // E of the truncated entry
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> rescale_factors;  // row-major sigma_jk^{-1}

  double sigma_min() const;
};

struct PreprocessResult {
  QuaternionMatrix matrix;
  PreprocessReport report;
};

/// Truncate at n^{1/4} (strict inequality keeps the entry), subtract the
/// analytic truncated mean, divide by the analytic standard deviation of the
/// centred entry.
PreprocessResult preprocess(const QuaternionMatrix& x, std::size_t n, const EntryDistribution& dist);

/// (1/n) psi(X) psi(X)^*, exactly Hermitian.
ComplexMatrix sample_covariance(const QuaternionMatrix& x);

}  // namespace qmp
