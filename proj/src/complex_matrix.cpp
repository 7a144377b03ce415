#include "qmp/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qmp/errors.hpp"

namespace qmp {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return s;
}

Complex ComplexMatrix::trace() const {
  if (!square()) throw std::invalid_argument("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double ar = a(i, k).real();
      const double ai = a(i, k).imag();
      if (ar == 0.0 && ai == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const double br = brow[j].real();
        const double bi = brow[j].imag();
        orow[j] += Complex(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix sum: shape mismatch");
  ComplexMatrix out = a;
  auto od = out.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] += bd[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a + Complex(-1.0) * b;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (auto& z : out.data()) z *= s;
  return out;
}

ComplexMatrix gram(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  ComplexMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const Complex* ri = a.row(i).data();
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex* rj = a.row(j).data();
      double sr = 0.0;
      double si = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        // ri[t] * conj(rj[t])
        const double xr = ri[t].real(), xi = ri[t].imag();
        const double yr = rj[t].real(), yi = rj[t].imag();
        sr += xr * yr + xi * yi;
        si += xi * yr - xr * yi;
      }
      out(i, j) = Complex(sr, si);
      out(j, i) = Complex(sr, -si);
    }
    out(i, i) = Complex(out(i, i).real(), 0.0);
  }
  return out;
}

double hermitian_deviation(const ComplexMatrix& h) {
  if (!h.square()) throw std::invalid_argument("hermitian_deviation: non-square matrix");
  double dev = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      dev = std::max(dev, std::abs(h(i, j) - std::conj(h(j, i))));
  return dev;
}

namespace {

// In-place LU with partial pivoting; returns the row permutation.
std::vector<std::size_t> lu_factor(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw NumericalError("LU factorization: singular matrix");
    if (piv != k) {
      std::swap_ranges(a.row(k).begin(), a.row(k).end(), a.row(piv).begin());
      std::swap(perm[k], perm[piv]);
    }
    const Complex inv_pivot = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) * inv_pivot;
      a(i, k) = f;
      if (f == 0.0) continue;
      auto ri = a.row(i);
      auto rk = a.row(k);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
    }
  }
  return perm;
}

void lu_solve_in_place(const ComplexMatrix& lu, const std::vector<std::size_t>& perm,
                       std::span<Complex> x, std::span<const Complex> b) {
  const std::size_t n = lu.rows();
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Complex s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x[j];
    x[ii] = s / lu(ii, ii);
  }
}

}  // namespace

ComplexMatrix inverse(const ComplexMatrix& a) {
  if (!a.square()) throw std::invalid_argument("inverse: non-square matrix");
  const std::size_t n = a.rows();
  ComplexMatrix lu = a;
  const auto perm = lu_factor(lu);
  ComplexMatrix inv(n, n);
  std::vector<Complex> e(n), x(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), Complex(0.0));
    e[c] = 1.0;
    lu_solve_in_place(lu, perm, x, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
  }
  return inv;
}

std::vector<Complex> solve(ComplexMatrix a, std::vector<Complex> b) {
  if (!a.square() || b.size() != a.rows())
    throw std::invalid_argument("solve: shape mismatch");
  const auto perm = lu_factor(a);
  std::vector<Complex> x(b.size());
  lu_solve_in_place(a, perm, x, b);
  return x;
}

}  // namespace qmp
