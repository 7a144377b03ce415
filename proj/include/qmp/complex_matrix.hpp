#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qmp {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<Complex> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  double max_abs() const noexcept;
  double frobenius_norm_squared() const noexcept;
  Complex trace() const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);

/// A·A* exploiting the Hermitian result; only the lower triangle is computed
/// and mirrored, so the output is exactly Hermitian.
ComplexMatrix gram(const ComplexMatrix& a);

/// max |H(i,j) - conj(H(j,i))|.
double hermitian_deviation(const ComplexMatrix& h);

/// Inverse by LU with partial pivoting. Throws NumericalError on an exactly
/// singular pivot.
ComplexMatrix inverse(const ComplexMatrix& a);

/// Solves A x = b for one right-hand side (LU with partial pivoting).
std::vector<Complex> solve(ComplexMatrix a, std::vector<Complex> b);

}  // namespace qmp
