#include "entgeom/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace entgeom::linalg {

namespace {

// Jacobi is more accurate on the tiny matrices that dominate here; BDC
// handles the few large unfoldings.
constexpr Eigen::Index kJacobiLimit = 48;

}  // namespace

Eigen::VectorXd singular_values(const CMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit) {
    Eigen::JacobiSVD<CMatrix> solver(m);
    return solver.singularValues();
  }
  Eigen::BDCSVD<CMatrix> solver(m);
  return solver.singularValues();
}

double sigma_max(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() <= 2 || m.cols() <= 2) {
    // Closed form on the 2x2 Gram matrix.
    const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
    if (g.rows() == 1) return std::sqrt(std::max(0.0, g(0, 0).real()));
    const double a = g(0, 0).real();
    const double d = g(1, 1).real();
    const double b2 = std::norm(g(0, 1));
    const double half = 0.5 * (a + d);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a - d) * (a - d) + b2));
    return std::sqrt(std::max(0.0, half + disc));
  }
  return singular_values(m)(0);
}

double nuclear_norm(const CMatrix& m) { return singular_values(m).sum(); }

Svd svd(const CMatrix& m) {
  if (std::min(m.rows(), m.cols()) <= kJacobiLimit) {
    Eigen::JacobiSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
  }
  Eigen::BDCSVD<CMatrix> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

HermitianEigen hermitian_eigen(const CMatrix& h) {
  const CMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm_hermitian(const CMatrix& h) {
  return hermitian_eigen(h).values.cwiseAbs().sum();
}

double trace_norm(const CMatrix& m) { return nuclear_norm(m); }

double max_abs_entry(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const CMatrix& m) {
  return max_abs_entry(m - m.adjoint());
}

CMatrix orthonormal_complement(const CMatrix& q) {
  const Eigen::Index n = q.rows();
  const Eigen::Index m = q.cols();
  CMatrix basis(n, n);
  basis.leftCols(m) = q;
  Eigen::Index filled = m;
  for (Eigen::Index e = 0; e < n && filled < n; ++e) {
    CVector v = CVector::Zero(n);
    v(e) = 1.0;
    // Two passes of classical Gram-Schmidt keep the result orthonormal to
    // machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index j = 0; j < filled; ++j) {
        v -= basis.col(j) * basis.col(j).dot(v);
      }
    }
    const double len = v.norm();
    if (len > 1e-8) {
      basis.col(filled++) = v / len;
    }
  }
  return basis.rightCols(n - m);
}

std::vector<std::vector<std::size_t>> bipartitions(std::size_t rank) {
  std::vector<std::vector<std::size_t>> out;
  if (rank < 2) return out;
  const std::size_t others = rank - 1;
  // Slot 0 always sits in S; enumerate which of the remaining slots join it.
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << others); ++mask) {
    std::vector<std::size_t> s{0};
    for (std::size_t k = 0; k < others; ++k) {
      if (mask & (std::size_t{1} << k)) s.push_back(k + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace entgeom::linalg
