#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmp/bai_bound.hpp"
#include "qmp/experiments.hpp"
#include "qmp/mp_law.hpp"

using namespace qmp;

namespace {

StepCDF quantile_esd(const MPLaw& law, std::size_t N) {
  Spectrum s;
  for (std::size_t k = 1; k <= N; ++k) s.eigenvalues.push_back(quantile(law, (k - 0.5) / N));
  return esd(s);
}

void check_consistent(const BaiBoundReport& r) {
  CHECK(r.term_stieltjes >= 0.0);
  CHECK(r.term_tail >= 0.0);
  CHECK(r.term_smoothing >= 0.0);
  CHECK(r.total == doctest::Approx(r.prefactor * (r.term_stieltjes + r.term_tail + r.term_smoothing))
                       .epsilon(1e-14));
  CHECK(r.holds());
}

}  // namespace

TEST_CASE("constants") {
  const auto c = make_constants(2.25);
  CHECK(c.gamma == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.bai_a == doctest::Approx(std::sqrt(3.0)));
  CHECK(c.B == 3.25);
  CHECK(c.A == 17.25);
  CHECK(c.kappa == doctest::Approx(12 * 3.25 / (std::numbers::pi * 14)).epsilon(1e-14));
  CHECK(c.kappa == doctest::Approx(0.887).epsilon(1e-3));
  CHECK(c.prefactor() ==
        doctest::Approx(1.0 / (std::numbers::pi * (1 - c.kappa) * (2 * c.gamma - 1))).epsilon(1e-15));

  CHECK_THROWS_AS(bai_constants(1.0, 17.25, 3.25), std::invalid_argument);
  CHECK_THROWS_AS(bai_constants(std::sqrt(3.0), 3.0, 3.25), std::invalid_argument);
  CHECK_THROWS_AS(bai_constants(std::sqrt(3.0), 4.0, 3.25), std::invalid_argument);  // kappa > 1
  CHECK_NOTHROW(bai_constants(10.0, 40.0, 3.25));
}

TEST_CASE("make_constants is always valid") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> b(0.0, 100.0);
  for (int t = 0; t < 1000; ++t) {
    const double bs = t == 0 ? 100.0 : std::max(1e-9, b(rng));
    const auto c = make_constants(bs);
    CHECK(c.gamma > 0.5);
    CHECK(c.kappa < 1.0);
    CHECK(c.kappa < 3.0 / std::numbers::pi);
    CHECK(c.A > c.B);
    CHECK(c.B > 0.0);
  }
}

TEST_CASE("quantile discretization") {
  const MPLaw law(0.25);
  const auto f = quantile_esd(law, 10000);
  const auto r = bai_rhs(f, law, 0.1, make_constants(law.upper_edge()));
  check_consistent(r);
  CHECK(r.observed_ks <= 1.0 / 10000 + 1e-9);
  CHECK(r.term_tail == 0.0);
}

TEST_CASE("single replication at n = 400") {
  const MPLaw law(0.25);
  const auto s = replicate_spectrum(100, 400, EntryDistribution::of(EntryKind::q_gaussian), 1);
  const auto r = bai_rhs(esd(s), law, 0.1, make_constants(law.upper_edge()));
  check_consistent(r);
  MESSAGE("ks=" << r.observed_ks << " total=" << r.total);
}

TEST_CASE("tail term scales as 1/v") {
  const MPLaw law(0.25);
  Spectrum s;
  for (int k = 1; k <= 99; ++k) s.eigenvalues.push_back(quantile(law, (k - 0.5) / 100));
  s.eigenvalues.push_back(5.0);  // beyond B = 3.25
  const auto f = esd(s);
  const auto c = make_constants(law.upper_edge());
  const auto r1 = bai_rhs(f, law, 0.1, c);
  const auto r2 = bai_rhs(f, law, 0.2, c);
  CHECK(r1.term_tail > 0.0);
  CHECK(r1.term_tail == doctest::Approx(2 * std::numbers::pi / 0.1 * 0.01 * (5.0 - 3.25)).epsilon(1e-12));
  CHECK(r2.term_tail == doctest::Approx(r1.term_tail / 2).epsilon(1e-14));
  check_consistent(r1);
  check_consistent(r2);
}

TEST_CASE("smoothing term is nondecreasing in v") {
  for (double y : {0.25, 1.0, 2.0}) {
    const MPLaw law(y);
    const auto f = quantile_esd(law, 50);
    const auto c = make_constants(law.upper_edge());
    double prev = 0.0;
    for (double v : {0.01, 0.02, 0.05, 0.1, 0.2, 0.4}) {
      const auto r = bai_rhs(f, law, v, c);
      CHECK(r.term_smoothing >= prev);
      CHECK(r.term_smoothing >= r.smoothing_grid);
      if (y <= 1) {
        CHECK(r.smoothing_grid <= r.smoothing_closed_form * (1 + 1e-12));
      } else {
        CHECK(std::isnan(r.smoothing_closed_form));
      }
      prev = r.term_smoothing;
    }
  }
}

TEST_CASE("input checks") {
  const MPLaw law(0.25);
  const auto f = quantile_esd(law, 10);
  CHECK_THROWS_AS(bai_rhs(f, law, 0.0, make_constants(2.25)), std::invalid_argument);
  CHECK(default_bound_v(32) == doctest::Approx(std::pow(32.0, -0.4)).epsilon(1e-15));
  CHECK(default_bound_v(32, 2.0) == doctest::Approx(2 * std::pow(32.0, -0.4)).epsilon(1e-15));
}
