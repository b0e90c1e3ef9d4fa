#pragma once

#include <cstddef>
#include <optional>

#include "entgeom/tensor.hpp"

namespace entgeom {

struct SphereCoverResult {
  /// Certified: ||t||_V <= upper.
  double upper = 0.0;
  /// Largest exact value met at a cell centre; a valid lower bound.
  double best_value = 0.0;
  CVector best_point;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Branch and bound over the Bloch sphere of a qubit slot of a three-slot tensor.
///
/// With a the qubit factor and x its Bloch vector, contracting t against
/// conj(a) leaves a matrix M(a) whose Gram matrix M M^H is affine in x. So
/// sigma_max(M(a))^2 = lambda_max(G(x)) is a convex function of x in R^3 and
/// its maximum over any polytope is attained at a vertex. Each (theta, phi)
/// cell of the sphere is enclosed in a hexagonal prism; the largest vertex
/// value bounds the cell. Cells are split best-first until the largest bound
/// is within `tolerance` of max(lower, best centre value) or `budget` cells
/// have been evaluated.
///
/// Returns nullopt unless t has three slots and `slot` has dimension 2.
std::optional<SphereCoverResult> sphere_cover_bound(const Tensor& t, std::size_t slot, double lower,
                                                    std::size_t budget, double tolerance);

}  // namespace entgeom
