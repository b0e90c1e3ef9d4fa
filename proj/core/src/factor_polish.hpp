#pragma once

// Internal: smooth local refinement of product decompositions.

#include <vector>

#include "entgeom/tensor.hpp"

namespace entgeom::detail {

/// Unnormalized rank-one terms: term j is the tensor product of factors[j].
using FactorSet = std::vector<std::vector<CVector>>;

/// Locally minimizes sum_j prod_k |f_jk| subject to sum_j (x)_k f_jk = t.
///
/// Uses the balanced surrogate sum_jk |f_jk|^N / N, which equals the cost
/// when the factors of each term have equal norms and bounds it from above
/// otherwise, plus a quadratic reconstruction penalty whose weight grows
/// over a fixed schedule. The result may leave a small residual; callers
/// must score it.
FactorSet polish_decomposition(const Tensor& t, FactorSet start, int max_iterations);

/// Independent real coordinates of a Hermitian matrix, scaled so that the
/// Euclidean norm equals the Frobenius norm.
Eigen::VectorXd hermitian_coordinates(const CMatrix& h);

/// Balanced factors of coefficient * p, with the phase on the first factor.
std::vector<CVector> balanced_factors(Complex coefficient, const std::vector<CVector>& unit_factors);

/// Least-squares fit of sum_j (x)_k a_jk a_jk^H to a Hermitian matrix.
///
/// `start[j]` holds the per-slot vectors of term j; the fit is over the
/// independent real entries of the target.
FactorSet fit_separable(const CMatrix& target, FactorSet start, int max_iterations);

}  // namespace entgeom::detail
