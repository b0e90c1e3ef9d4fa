#pragma once

#include <vector>

#include "entgeom/tensor.hpp"

namespace entgeom::linalg {

/// Singular values, descending.
Eigen::VectorXd singular_values(const CMatrix& m);
double sigma_max(const CMatrix& m);
double nuclear_norm(const CMatrix& m);

/// Thin SVD m = U diag(s) V^H.
struct Svd {
  CMatrix u;
  Eigen::VectorXd s;
  CMatrix v;
};
Svd svd(const CMatrix& m);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  Eigen::VectorXd values;
  CMatrix vectors;
};
HermitianEigen hermitian_eigen(const CMatrix& h);

/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm_hermitian(const CMatrix& h);
/// Sum of singular values of any square matrix.
double trace_norm(const CMatrix& m);

double max_abs_entry(const CMatrix& m);
double hermiticity_defect(const CMatrix& m);

/// Extend the orthonormal columns of q (n x m) to an n x (n - m) orthonormal
/// complement by Gram-Schmidt over the standard basis e_0, e_1, ... in order.
CMatrix orthonormal_complement(const CMatrix& q);

/// All bipartitions {S, S^c} of {0, ..., rank-1} with 0 in S and S^c nonempty.
/// Each entry lists the slots of S in ascending order.
std::vector<std::vector<std::size_t>> bipartitions(std::size_t rank);

}  // namespace entgeom::linalg
