#include "qmp/quaternion.hpp"

#include <cmath>
#include <stdexcept>

namespace qmp {

bool Quaternion::finite() const noexcept {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

double Quaternion::norm() const noexcept { return std::sqrt(norm_squared()); }

ComplexBlock2x2 embed(const Quaternion& q) {
  if (!q.finite()) throw std::invalid_argument("embed: non-finite quaternion coefficient");
  const Complex l = q.lambda();
  const Complex w = q.omega();
  return {{{l, w}, {-std::conj(w), std::conj(l)}}};
}

Quaternion from_block(const ComplexBlock2x2& m) noexcept {
  return {m[0][0].real(), m[0][0].imag(), m[0][1].real(), m[0][1].imag()};
}

Quaternion quaternion_conj(const Quaternion& q) noexcept { return {q.a, -q.b, -q.c, -q.d}; }

ComplexBlock2x2 block_product(const ComplexBlock2x2& x, const ComplexBlock2x2& y) noexcept {
  ComplexBlock2x2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return r;
}

Quaternion operator*(const Quaternion& x, const Quaternion& y) {
  return from_block(block_product(embed(x), embed(y)));
}

Quaternion operator+(const Quaternion& x, const Quaternion& y) noexcept {
  return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
}

Quaternion operator-(const Quaternion& x, const Quaternion& y) noexcept {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

Quaternion operator*(double s, const Quaternion& x) noexcept {
  return {s * x.a, s * x.b, s * x.c, s * x.d};
}

QuaternionMatrix QuaternionMatrix::adjoint() const {
  QuaternionMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = quaternion_conj((*this)(r, c));
  return out;
}

QuaternionMatrix operator*(const QuaternionMatrix& m, const QuaternionMatrix& n) {
  if (m.cols() != n.rows()) throw std::invalid_argument("quaternion product: shape mismatch");
  QuaternionMatrix out(m.rows(), n.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < n.cols(); ++j) {
      ComplexBlock2x2 acc{};
      for (std::size_t k = 0; k < m.cols(); ++k) {
        const auto p = block_product(embed(m(i, k)), embed(n(k, j)));
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c) acc[r][c] += p[r][c];
      }
      out(i, j) = from_block(acc);
    }
  return out;
}

ComplexMatrix embed_matrix(const QuaternionMatrix& m) {
  ComplexMatrix out(2 * m.rows(), 2 * m.cols());
  for (std::size_t j = 0; j < m.rows(); ++j)
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const auto blk = embed(m(j, k));
      out(2 * j, 2 * k) = blk[0][0];
      out(2 * j, 2 * k + 1) = blk[0][1];
      out(2 * j + 1, 2 * k) = blk[1][0];
      out(2 * j + 1, 2 * k + 1) = blk[1][1];
    }
  return out;
}

}  // namespace qmp
