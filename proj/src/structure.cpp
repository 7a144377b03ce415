#include "qmp/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmp {

double default_structure_tolerance(const ComplexMatrix& c) { return 1e-10 * (1.0 + c.max_abs()); }

StructureReport classify_structure(const ComplexMatrix& c, double tol) {
  if (!c.square() || c.rows() % 2 != 0)
    throw std::invalid_argument("classify_structure: matrix must be square with even dimension");
  if (!(tol >= 0.0)) throw std::invalid_argument("classify_structure: tolerance must be >= 0");

  const std::size_t nb = c.rows() / 2;
  auto at = [&](std::size_t bj, std::size_t bk, int r, int s) -> Complex {
    return c(2 * bj + r, 2 * bk + s);
  };

  double v1 = 0.0;
  double v3 = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    const double diag = std::max({std::abs(at(j, j, 0, 1)), std::abs(at(j, j, 1, 0)),
                                  std::abs(at(j, j, 0, 0) - at(j, j, 1, 1))});
    v1 = std::max(v1, diag);
    v3 = std::max(v3, diag);
    for (std::size_t k = j + 1; k < nb; ++k) {
      const Complex a = at(j, k, 0, 0), b = at(j, k, 0, 1);
      const Complex cc = at(j, k, 1, 0), d = at(j, k, 1, 1);
      const Complex m00 = at(k, j, 0, 0), m01 = at(k, j, 0, 1);
      const Complex m10 = at(k, j, 1, 0), m11 = at(k, j, 1, 1);

      v1 = std::max({v1, std::abs(m00 - d), std::abs(m01 + b), std::abs(m10 + cc),
                     std::abs(m11 - a)});

      v3 = std::max({v3, std::abs(cc + std::conj(b)), std::abs(d - std::conj(a)),
                     std::abs(m00 - std::conj(a)), std::abs(m01 + b),
                     std::abs(m10 - std::conj(b)), std::abs(m11 - a)});
    }
  }
  return {v1 <= tol, v3 <= tol, v1, v3, tol};
}

StructureReport classify_structure(const ComplexMatrix& c) {
  return classify_structure(c, default_structure_tolerance(c));
}

}  // namespace qmp
