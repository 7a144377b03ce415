#pragma once

#include "qmp/complex_matrix.hpp"

namespace qmp {

/// Result of checking a 2n x 2n complex matrix against the two block patterns.
///
/// Type-I: every diagonal 2x2 block is t·I, and an upper block [[a,b],[c,d]]
/// at (j,k) is mirrored at (k,j) as [[d,-b],[-c,a]].
/// Type-III: diagonal blocks t·I, upper blocks of quaternion form
/// [[a,b],[-conj(b),conj(a)]] mirrored at (k,j) as [[conj(a),-b],[conj(b),a]].
/// Every Type-III matrix is also Type-I.
struct StructureReport {
  bool is_type1 = false;
  bool is_type3 = false;
  double type1_violation = 0.0;  // max absolute deviation from the Type-I pattern
  double type3_violation = 0.0;  // max absolute deviation from the Type-III pattern
  double tolerance = 0.0;
};

/// 1e-10 * (1 + max |c_ij|).
double default_structure_tolerance(const ComplexMatrix& c);

/// Throws std::invalid_argument for non-square or odd-dimension input.
StructureReport classify_structure(const ComplexMatrix& c, double tol);
StructureReport classify_structure(const ComplexMatrix& c);

}  // namespace qmp
