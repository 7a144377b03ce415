#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qmp/eigensolver.hpp"
#include "qmp/errors.hpp"
#include "qmp/sampling.hpp"

using namespace qmp;

namespace {

void check_trace_identities(const ComplexMatrix& h, const Spectrum& s) {
  double s1 = 0.0, s2 = 0.0;
  for (double l : s.eigenvalues) {
    s1 += l;
    s2 += l * l;
  }
  const double tr = h.trace().real();
  const double fro = h.frobenius_norm_squared();
  CHECK(std::abs(s1 - tr) <= 1e-10 * std::max(1.0, std::sqrt(fro)));
  CHECK(std::abs(s2 - fro) <= 1e-10 * fro);
}

}  // namespace

TEST_CASE("trivial spectra") {
  CHECK(eigenvalues_hermitian(ComplexMatrix::identity(2)).eigenvalues == std::vector<double>{1, 1});
  ComplexMatrix d(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto s = eigenvalues_hermitian(d);
  REQUIRE(s.dimension() == 3);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(3.0));

  ComplexMatrix one(1, 1);
  one(0, 0) = -4.5;
  CHECK(eigenvalues_hermitian(one).eigenvalues == std::vector<double>{-4.5});
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(eigenvalues_hermitian(ComplexMatrix(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(eigenvalues_hermitian(ComplexMatrix()), std::invalid_argument);
  ComplexMatrix h = ComplexMatrix::identity(3);
  h(0, 1) = {0.0, 1.0};  // not mirrored
  CHECK_THROWS_AS(eigenvalues_hermitian(h), std::invalid_argument);
  h(1, 0) = {0.0, -1.0};
  CHECK_NOTHROW(eigenvalues_hermitian(h));
  h(2, 2) = std::nan("");
  CHECK_THROWS_AS(eigenvalues_hermitian(h), std::invalid_argument);
}

TEST_CASE("characteristic polynomial changes sign at each eigenvalue") {
  std::mt19937_64 rng(8);
  const ComplexMatrix h = oracle::random_hermitian(8, rng);
  const auto s = eigenvalues_hermitian(h);
  check_trace_identities(h, s);
  auto charpoly = [&](double x) {
    ComplexMatrix m = h;
    for (std::size_t i = 0; i < 8; ++i) m(i, i) -= x;
    return oracle::determinant(m).real();
  };
  for (std::size_t j = 0; j < 8; ++j) {
    const double l = s.eigenvalues[j];
    const double gap = std::min(j > 0 ? l - s.eigenvalues[j - 1] : 1.0,
                                j + 1 < 8 ? s.eigenvalues[j + 1] - l : 1.0);
    REQUIRE(gap > 1e-6);
    const double eta = std::min(1e-6, gap / 4);
    CHECK(charpoly(l - eta) * charpoly(l + eta) < 0.0);
  }
}

TEST_CASE("trace, Frobenius and residual oracles on random matrices") {
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<std::size_t> dim(1, 64);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = dim(rng);
    const ComplexMatrix h = oracle::random_hermitian(n, rng);
    const auto es = eigensystem_hermitian(h);
    const auto& ev = es.spectrum.eigenvalues;
    check_trace_identities(h, es.spectrum);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
    CHECK(eigenvalues_hermitian(h).eigenvalues.size() == n);
    const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    for (std::size_t j = 0; j < n; j += std::max<std::size_t>(1, n / 5)) {
      double res = 0.0, vnorm = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        Complex hv = 0.0;
        for (std::size_t c = 0; c < n; ++c) hv += h(r, c) * es.vectors(c, j);
        res += std::norm(hv - ev[j] * es.vectors(r, j));
        vnorm += std::norm(es.vectors(r, j));
      }
      CHECK(std::sqrt(res) <= 1e-9 * norm);
      CHECK(vnorm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate and structured inputs") {
  // Repeated eigenvalues from a quaternion covariance and a rank-one matrix.
  std::mt19937_64 rng(4);
  const auto x = oracle::random_qmatrix(5, 12, rng);
  const auto s = eigenvalues_hermitian(gram(embed_matrix(x)));
  check_trace_identities(gram(embed_matrix(x)), s);
  CHECK(pairing_defect(s) <= 1e-8);

  ComplexMatrix r1(6, 6);
  std::vector<Complex> v{{1, 2}, {0, -1}, 3, {0.5, 0.5}, -2, {0, 4}};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) r1(i, j) = v[i] * std::conj(v[j]);
  const auto sr = eigenvalues_hermitian(r1);
  double nv = 0.0;
  for (auto c : v) nv += std::norm(c);
  CHECK(sr.max() == doctest::Approx(nv).epsilon(1e-12));
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(sr.eigenvalues[i]) <= 1e-12 * nv);
}

TEST_CASE("covariance spectrum clamps structural zeros") {
  const auto dist = EntryDistribution::of(EntryKind::q_gaussian);
  const auto x = sample_matrix(7, 3, dist, 12);
  const auto s = covariance_spectrum(sample_covariance(x));
  REQUIRE(s.dimension() == 14);
  for (std::size_t i = 0; i < 8; ++i) CHECK(s.eigenvalues[i] == 0.0);
  for (std::size_t i = 8; i < 14; ++i) CHECK(s.eigenvalues[i] > 0.01);
  CHECK(pairing_defect(s) <= 1e-8);
}

TEST_CASE("pairing on sampled covariances") {
  for (auto kind : {EntryKind::q_gaussian, EntryKind::q_rademacher, EntryKind::q_bounded_mix}) {
    const auto dist = EntryDistribution::of(kind);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto x = sample_matrix(30, 60, dist, seed);
      const auto s = covariance_spectrum(sample_covariance(x));
      CHECK(pairing_defect(s) <= 1e-8);
    }
  }
}
