#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "qmp/complex_matrix.hpp"
#include "qmp/quaternion.hpp"
#include "qmp/structure.hpp"

using namespace qmp;

namespace {

const Complex I{0.0, 1.0};

double block_gap(const ComplexBlock2x2& x, const ComplexBlock2x2& y) {
  double m = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) m = std::max(m, std::abs(x[r][c] - y[r][c]));
  return m;
}

double max_gap(const ComplexMatrix& x, const ComplexMatrix& y) {
  REQUIRE(x.rows() == y.rows());
  REQUIRE(x.cols() == y.cols());
  return (x - y).max_abs();
}

// Random Type-III matrix of block dimension n: scalar diagonal blocks and
// quaternion blocks mirrored by quaternion conjugation.
ComplexMatrix random_type3(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix c(2 * n, 2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex t{g(rng) + 3.0, g(rng)};
    c(2 * j, 2 * j) = t;
    c(2 * j + 1, 2 * j + 1) = t;
    for (std::size_t k = j + 1; k < n; ++k) {
      const Quaternion q = oracle::random_quaternion(rng);
      const auto up = embed(q);
      const auto lo = embed(quaternion_conj(q));
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
          c(2 * j + r, 2 * k + s) = up[r][s];
          c(2 * k + r, 2 * j + s) = lo[r][s];
        }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("embedding of basis quaternions") {
  const auto e = embed(Quaternion::one());
  CHECK(e[0][0] == Complex(1));
  CHECK(e[1][1] == Complex(1));
  CHECK(e[0][1] == Complex(0));
  CHECK(e[1][0] == Complex(0));

  const auto k = embed({0, 0, 0, 1});
  CHECK(k[0][0] == Complex(0));
  CHECK(k[0][1] == I);
  CHECK(k[1][0] == I);
  CHECK(k[1][1] == Complex(0));

  const Quaternion x{1, 1, 1, 1};
  const auto prod = block_product(embed(x), embed(quaternion_conj(x)));
  CHECK(block_gap(prod, embed({4, 0, 0, 0})) == 0.0);
  CHECK(x.norm_squared() == 4.0);
}

TEST_CASE("embedded block layout and norm split") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const Quaternion q = oracle::random_quaternion(rng);
    const auto m = embed(q);
    CHECK(m[1][1] == std::conj(m[0][0]));
    CHECK(m[1][0] == -std::conj(m[0][1]));
    CHECK(m[0][0] == Complex(q.a, q.b));
    CHECK(m[0][1] == Complex(q.c, q.d));
    CHECK(q.norm_squared() ==
          doctest::Approx(std::norm(q.lambda()) + std::norm(q.omega())).epsilon(1e-15));
    CHECK(from_block(m) == q);
  }
}

TEST_CASE("embed rejects non-finite coefficients") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(embed({nan, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(embed({0, 0, inf, 0}), std::invalid_argument);
}

TEST_CASE("conjugation") {
  CHECK(quaternion_conj({1, 0, 0, 0}) == Quaternion{1, 0, 0, 0});
  CHECK(quaternion_conj({0, 1, 0, 0}) == Quaternion{0, -1, 0, 0});
  CHECK(quaternion_conj({1, 2, 3, 4}) == Quaternion{1, -2, -3, -4});

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Quaternion q = oracle::random_quaternion(rng, 10.0);
    CHECK(quaternion_conj(quaternion_conj(q)) == q);
    const auto m = embed(q);
    const auto mc = embed(quaternion_conj(q));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) CHECK(mc[r][c] == std::conj(m[c][r]));
  }
}

TEST_CASE("block product agrees with the Hamilton table") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    const Quaternion p = oracle::random_quaternion(rng);
    const Quaternion q = oracle::random_quaternion(rng);
    const Quaternion got = p * q;
    const Quaternion want = oracle::hamilton(p, q);
    CHECK(got.a == doctest::Approx(want.a).epsilon(1e-12).scale(1.0));
    CHECK(got.b == doctest::Approx(want.b).epsilon(1e-12).scale(1.0));
    CHECK(got.c == doctest::Approx(want.c).epsilon(1e-12).scale(1.0));
    CHECK(got.d == doctest::Approx(want.d).epsilon(1e-12).scale(1.0));
    // Norm multiplicativity.
    CHECK(got.norm() == doctest::Approx(p.norm() * q.norm()).epsilon(1e-12));
  }
  // i j = k, j k = i, k i = j, i^2 = -1.
  const Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
  CHECK(i * j == k);
  CHECK(j * k == i);
  CHECK(k * i == j);
  CHECK(i * i == Quaternion{-1, 0, 0, 0});
}

TEST_CASE("embed_matrix small cases") {
  QuaternionMatrix e(1, 1);
  e(0, 0) = Quaternion::one();
  CHECK(embed_matrix(e) == ComplexMatrix::identity(2));

  QuaternionMatrix ej(2, 1);
  ej(0, 0) = Quaternion::one();
  ej(1, 0) = {0, 0, 1, 0};
  const ComplexMatrix m = embed_matrix(ej);
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 2);
  ComplexMatrix want(4, 2);
  want(0, 0) = 1;
  want(1, 1) = 1;
  want(2, 1) = 1;
  want(3, 0) = -1;
  CHECK(m == want);
}

TEST_CASE("embed_matrix is a homomorphism") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const auto m = oracle::random_qmatrix(3, 2, rng);
    const auto n = oracle::random_qmatrix(2, 4, rng);
    const ComplexMatrix lhs = embed_matrix(m * n);
    const ComplexMatrix rhs = embed_matrix(m) * embed_matrix(n);
    CHECK(max_gap(lhs, rhs) <= 1e-12 * (1.0 + rhs.max_abs()));

    // Product through the coefficient formula, independent of the block path.
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        Quaternion acc;
        for (std::size_t k = 0; k < 2; ++k) acc = acc + oracle::hamilton(m(r, k), n(k, c));
        CHECK(block_gap(embed(acc), embed((m * n)(r, c))) <= 1e-12 * (1.0 + acc.norm()));
      }

    CHECK(max_gap(embed_matrix(m.adjoint()), embed_matrix(m).adjoint()) <= 1e-15);
  }
}

TEST_CASE("classify_structure basics") {
  const auto r = classify_structure(ComplexMatrix::identity(4));
  CHECK(r.is_type1);
  CHECK(r.is_type3);
  CHECK(r.type1_violation == 0.0);
  CHECK(r.type3_violation == 0.0);

  CHECK_THROWS_AS(classify_structure(ComplexMatrix::identity(3)), std::invalid_argument);
  CHECK_THROWS_AS(classify_structure(ComplexMatrix(2, 4)), std::invalid_argument);

  // A generic complex matrix is neither.
  std::mt19937_64 rng(1);
  const auto h = oracle::random_hermitian(4, rng);
  const auto g = classify_structure(h);
  CHECK_FALSE(g.is_type1);
  CHECK_FALSE(g.is_type3);
  CHECK(g.type1_violation > 0.1);
}

TEST_CASE("Type-I pattern that is not Type-III") {
  // Off-diagonal block [[a,b],[c,d]] with c != -conj(b) mirrored as [[d,-b],[-c,a]].
  ComplexMatrix c = ComplexMatrix::identity(4);
  const Complex a{1, 2}, b{0.5, -1}, cc{3, 0.25}, d{-2, 1};
  c(0, 2) = a;
  c(0, 3) = b;
  c(1, 2) = cc;
  c(1, 3) = d;
  c(2, 0) = d;
  c(2, 1) = -b;
  c(3, 0) = -cc;
  c(3, 1) = a;
  const auto r = classify_structure(c);
  CHECK(r.is_type1);
  CHECK(r.type1_violation == 0.0);
  CHECK_FALSE(r.is_type3);
}

TEST_CASE("shifted quaternion Gram matrix is Type-III and its inverse Type-I") {
  std::mt19937_64 rng(23);
  const auto x = oracle::random_qmatrix(2, 3, rng);
  ComplexMatrix h = gram(embed_matrix(x));
  const Complex z{0.7, 0.4};
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= z;

  const auto r3 = classify_structure(h, 1e-12);
  CHECK(r3.is_type3);
  CHECK(r3.is_type1);

  const ComplexMatrix inv = inverse(h);
  const auto r1 = classify_structure(inv, 1e-10);
  CHECK(r1.is_type1);
  // Identity check on the inverse itself.
  CHECK(max_gap(inv * h, ComplexMatrix::identity(4)) <= 1e-12);
}

TEST_CASE("inverse of a Type-III matrix is Type-I on 200 instances") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::size_t> dim(1, 10);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix c = random_type3(dim(rng), rng);
    REQUIRE(classify_structure(c).is_type3);
    const ComplexMatrix inv = inverse(c);
    const auto r = classify_structure(inv, 1e-9 * inv.max_abs());
    worst = std::max(worst, r.type1_violation / inv.max_abs());
    CHECK(r.is_type1);
  }
  MESSAGE("worst relative Type-I violation of an inverse: " << worst);
  CHECK(worst <= 1e-9);
}
