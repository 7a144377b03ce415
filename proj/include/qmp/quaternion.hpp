#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qmp/complex_matrix.hpp"

namespace qmp {

/// 2x2 complex block [[lambda, omega], [-conj(omega), conj(lambda)]].
using ComplexBlock2x2 = std::array<std::array<Complex, 2>, 2>;

/// Real quaternion a·e + b·i + c·j + d·k.
///
/// The algebra is carried by the complex 2x2 representation: products are
/// computed as block products, so `embed` is a homomorphism by construction.
struct Quaternion {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion zero() { return {}; }

  bool finite() const noexcept;
  double norm_squared() const noexcept { return a * a + b * b + c * c + d * d; }
  double norm() const noexcept;

  Complex lambda() const noexcept { return {a, b}; }
  Complex omega() const noexcept { return {c, d}; }

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Throws std::invalid_argument on non-finite coefficients.
ComplexBlock2x2 embed(const Quaternion& q);

/// Inverse of `embed`. The block must have quaternion form; the coefficients
/// are read from the first row.
Quaternion from_block(const ComplexBlock2x2& m) noexcept;

Quaternion quaternion_conj(const Quaternion& q) noexcept;

ComplexBlock2x2 block_product(const ComplexBlock2x2& x, const ComplexBlock2x2& y) noexcept;

Quaternion operator*(const Quaternion& x, const Quaternion& y);
Quaternion operator+(const Quaternion& x, const Quaternion& y) noexcept;
Quaternion operator-(const Quaternion& x, const Quaternion& y) noexcept;
Quaternion operator*(double s, const Quaternion& x) noexcept;

/// Dense p x n quaternion matrix, row-major.
class QuaternionMatrix {
 public:
  QuaternionMatrix() = default;
  QuaternionMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Quaternion& operator()(std::size_t r, std::size_t c) noexcept {
    return entries_[r * cols_ + c];
  }
  const Quaternion& operator()(std::size_t r, std::size_t c) const noexcept {
    return entries_[r * cols_ + c];
  }

  const std::vector<Quaternion>& entries() const noexcept { return entries_; }
  std::vector<Quaternion>& entries() noexcept { return entries_; }

  /// Quaternion conjugate transpose.
  QuaternionMatrix adjoint() const;

  friend bool operator==(const QuaternionMatrix&, const QuaternionMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Quaternion> entries_;
};

QuaternionMatrix operator*(const QuaternionMatrix& m, const QuaternionMatrix& n);

/// The 2p x 2n complex representation; block (j, k) is embed(M(j, k)).
ComplexMatrix embed_matrix(const QuaternionMatrix& m);

}  // namespace qmp
