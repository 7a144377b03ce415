#pragma once

#include <optional>

#include "qmp/complex_matrix.hpp"
#include "qmp/spectra.hpp"

namespace qmp {

struct EigenSystem {
  Spectrum spectrum;
  ComplexMatrix vectors;  // column j pairs with spectrum.eigenvalues[j]
};

/// Eigenvalues of a complex Hermitian matrix.
///
/// Householder reduction to a tridiagonal with complex off-diagonal, a
/// diagonal unitary to make the off-diagonal real, then implicit-shift QL.
/// `tol` bounds the accepted relative Hermitian defect
/// max|H - H^*| <= tol * max(1, max|h_ij|); larger defects throw
/// std::invalid_argument. Throws NumericalError when QL exceeds 30·dim sweeps.
Spectrum eigenvalues_hermitian(const ComplexMatrix& h, double tol = 1e-10);

/// Same, accumulating orthonormal eigenvectors.
EigenSystem eigensystem_hermitian(const ComplexMatrix& h, double tol = 1e-10);

/// Eigenvalues of a positive semidefinite Gram/covariance matrix, with values
/// within rounding of zero (|lambda| <= 32·dim·eps·lambda_max) set to exactly 0.
Spectrum covariance_spectrum(const ComplexMatrix& h);

}  // namespace qmp
