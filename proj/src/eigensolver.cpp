#include "qmp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qmp/errors.hpp"

namespace qmp {

namespace {

struct Reflector {
  std::size_t offset = 0;  // acts on indices offset .. n-1
  double beta = 0.0;       // P = I - beta u u^*
  std::vector<Complex> u;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<Complex> off;  // off[k] = T(k+1, k)
  std::vector<Reflector> reflectors;
};

// Works on the lower triangle of a copy of h.
Tridiagonal tridiagonalize(const ComplexMatrix& h, bool keep_reflectors) {
  const std::size_t n = h.rows();
  ComplexMatrix a = h;
  Tridiagonal t;
  t.diag.resize(n);
  t.off.assign(n > 0 ? n - 1 : 0, Complex(0.0));

  std::vector<double> ur, ui, pr, pi;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    const std::size_t o = k + 1;
    ur.assign(m, 0.0);
    ui.assign(m, 0.0);
    double tail = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const Complex x = a(o + i, k);
      ur[i] = x.real();
      ui[i] = x.imag();
      if (i > 0) tail += std::norm(x);
    }
    const Complex alpha(ur[0], ui[0]);
    if (tail == 0.0) {
      t.off[k] = alpha;
      continue;
    }
    const double xnorm = std::sqrt(std::norm(alpha) + tail);
    const double aabs = std::abs(alpha);
    const Complex phase = aabs > 0.0 ? alpha / aabs : Complex(1.0);
    ur[0] += phase.real() * xnorm;
    ui[0] += phase.imag() * xnorm;
    double unorm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) unorm2 += ur[i] * ur[i] + ui[i] * ui[i];
    const double beta = 2.0 / unorm2;

    // p = beta * B u with B the Hermitian trailing block held in its lower triangle.
    pr.assign(m, 0.0);
    pi.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const Complex* row = &a(o + i, o);
      double sr = 0.0, si = 0.0;
      const double uir = ur[i], uii = ui[i];
      for (std::size_t j = 0; j < i; ++j) {
        const double br = row[j].real(), bi = row[j].imag();
        // B(i,j) u_j
        sr += br * ur[j] - bi * ui[j];
        si += br * ui[j] + bi * ur[j];
        // conj(B(i,j)) u_i contributes to p_j
        pr[j] += br * uir + bi * uii;
        pi[j] += br * uii - bi * uir;
      }
      const double d = row[i].real();
      pr[i] += sr + d * uir;
      pi[i] += si + d * uii;
    }
    double kr = 0.0;  // u^* p is real for Hermitian B
    for (std::size_t i = 0; i < m; ++i) {
      pr[i] *= beta;
      pi[i] *= beta;
      kr += ur[i] * pr[i] + ui[i] * pi[i];
    }
    const double kfac = 0.5 * beta * kr;
    // w = p - K u, stored in p
    for (std::size_t i = 0; i < m; ++i) {
      pr[i] -= kfac * ur[i];
      pi[i] -= kfac * ui[i];
    }
    // B <- B - u w^* - w u^*, lower triangle only
    for (std::size_t i = 0; i < m; ++i) {
      Complex* row = &a(o + i, o);
      const double uir = ur[i], uii = ui[i], wir = pr[i], wii = pi[i];
      for (std::size_t j = 0; j <= i; ++j) {
        // u_i conj(w_j) + w_i conj(u_j)
        const double re = uir * pr[j] + uii * pi[j] + wir * ur[j] + wii * ui[j];
        const double im = uii * pr[j] - uir * pi[j] + wii * ur[j] - wir * ui[j];
        row[j] -= Complex(re, im);
      }
      row[i] = Complex(row[i].real(), 0.0);
    }
    t.off[k] = -phase * xnorm;
    if (keep_reflectors) {
      Reflector r{o, beta, std::vector<Complex>(m)};
      for (std::size_t i = 0; i < m; ++i) r.u[i] = Complex(ur[i], ui[i]);
      t.reflectors.push_back(std::move(r));
    }
  }
  if (n >= 2) t.off[n - 2] = a(n - 1, n - 2);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
  return t;
}

// Implicit-shift QL on a real symmetric tridiagonal. e[i] couples i and i+1.
// When z is non-null it is an n x n row-major matrix whose columns are rotated.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
  if (n <= 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const long cap = 30L * n;
  long iterations = 0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    std::ptrdiff_t m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (++iterations > cap)
          throw NumericalError("eigensolver: QL iteration cap (" + std::to_string(cap) +
                               ") exceeded at dimension " + std::to_string(n));
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::ptrdiff_t i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            auto& zz = *z;
            for (std::ptrdiff_t k = 0; k < n; ++k) {
              f = zz[k * n + i + 1];
              zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
              zz[k * n + i] = c * zz[k * n + i] - s * f;
            }
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

void check_input(const ComplexMatrix& h, double tol) {
  if (!h.square() || h.rows() == 0)
    throw std::invalid_argument("eigensolver: matrix must be square and non-empty");
  for (const auto& z : h.data())
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("eigensolver: non-finite entry");
  const double dev = hermitian_deviation(h);
  if (dev > tol * std::max(1.0, h.max_abs()))
    throw std::invalid_argument("eigensolver: matrix is not Hermitian (deviation " +
                                std::to_string(dev) + ")");
}

std::vector<double> real_offdiagonal(const Tridiagonal& t) {
  std::vector<double> e(t.diag.size(), 0.0);
  for (std::size_t k = 0; k < t.off.size(); ++k) e[k] = std::abs(t.off[k]);
  return e;
}

}  // namespace

Spectrum eigenvalues_hermitian(const ComplexMatrix& h, double tol) {
  check_input(h, tol);
  Tridiagonal t = tridiagonalize(h, false);
  std::vector<double> e = real_offdiagonal(t);
  tridiagonal_ql(t.diag, e, nullptr);
  std::sort(t.diag.begin(), t.diag.end());
  return Spectrum{std::move(t.diag)};
}

EigenSystem eigensystem_hermitian(const ComplexMatrix& h, double tol) {
  check_input(h, tol);
  const std::size_t n = h.rows();
  Tridiagonal t = tridiagonalize(h, true);
  std::vector<double> e = real_offdiagonal(t);
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  tridiagonal_ql(t.diag, e, &z);

  // Phases turning the complex off-diagonal real: d_{k+1} = d_k e_k / |e_k|.
  std::vector<Complex> phase(n, Complex(1.0));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = std::abs(t.off[k]);
    phase[k + 1] = a > 0.0 ? phase[k] * (t.off[k] / a) : phase[k];
  }
  ComplexMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) v(i, j) = phase[i] * z[i * n + j];
  for (auto it = t.reflectors.rbegin(); it != t.reflectors.rend(); ++it) {
    const std::size_t o = it->offset;
    const std::size_t m = it->u.size();
    for (std::size_t j = 0; j < n; ++j) {
      Complex s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += std::conj(it->u[i]) * v(o + i, j);
      s *= it->beta;
      for (std::size_t i = 0; i < m; ++i) v(o + i, j) -= it->u[i] * s;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return t.diag[x] < t.diag[y]; });
  EigenSystem out{Spectrum{std::vector<double>(n)}, ComplexMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.spectrum.eigenvalues[c] = t.diag[order[c]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

Spectrum covariance_spectrum(const ComplexMatrix& h) {
  Spectrum s = eigenvalues_hermitian(h);
  const double top = std::max(0.0, s.eigenvalues.back());
  const double floor = 32.0 * static_cast<double>(s.dimension()) *
                       std::numeric_limits<double>::epsilon() * top;
  for (auto& l : s.eigenvalues)
    if (std::abs(l) <= floor) l = 0.0;
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

}  // namespace qmp
