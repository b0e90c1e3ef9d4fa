#include <cmath>
#include <random>

#include "entgeom/tensor.hpp"

namespace entgeom {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CVector random_gaussian_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(gen);
    const double im = normal(gen);
    v(i) = Complex(re, im);
  }
  return v;
}

CVector random_unit_vector(std::size_t n, std::uint64_t seed) {
  // A zero draw has probability zero; reseeding keeps the function total.
  for (std::uint64_t attempt = 0;; ++attempt) {
    CVector v = random_gaussian_vector(n, derive_seed(seed, attempt));
    const double len = v.norm();
    if (len > 0.0) return v / len;
  }
}

PureState random_state(const SpaceShape& shape, std::uint64_t seed) {
  return PureState(shape, random_unit_vector(shape.total_dim(), seed));
}

ProductVector random_product(std::span<const std::size_t> dims, std::uint64_t seed) {
  std::vector<CVector> factors;
  factors.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    factors.push_back(random_unit_vector(dims[k], derive_seed(seed, k)));
  }
  return ProductVector(std::move(factors));
}

ProductVector random_product(const SpaceShape& shape, std::uint64_t seed) {
  return random_product(std::span<const std::size_t>(shape.dims()), seed);
}

CMatrix random_isometry(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m > n) throw ShapeError("random_isometry: more columns than rows");
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(m);
  const CVector g = random_gaussian_vector(n * m, seed);
  const CMatrix ginibre = Eigen::Map<const CMatrix>(g.data(), rows, cols);
  Eigen::HouseholderQR<CMatrix> qr(ginibre);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  const CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  // Fix the column phases so the distribution is Haar, not QR-biased.
  for (Eigen::Index j = 0; j < cols; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_unitary(std::size_t n, std::uint64_t seed) { return random_isometry(n, n, seed); }

DensityOperator random_density(const SpaceShape& shape, std::uint64_t seed, std::size_t rank) {
  const std::size_t n = shape.total_dim();
  if (rank == 0) rank = n;
  const CVector g = random_gaussian_vector(n * rank, seed);
  const CMatrix ginibre = Eigen::Map<const CMatrix>(g.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(rank));
  CMatrix rho = ginibre * ginibre.adjoint();
  rho /= rho.trace().real();
  // Exact Hermitian symmetry; the product is Hermitian only up to rounding.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityOperator(shape, std::move(rho));
}

}  // namespace entgeom
