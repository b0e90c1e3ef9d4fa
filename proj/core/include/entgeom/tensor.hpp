#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entgeom/errors.hpp"

namespace entgeom {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Largest total dimension a SpaceShape may describe.
inline constexpr std::size_t kMaxTotalDim = std::size_t{1} << 20;
/// Unit-norm / Hermiticity tolerance for values built in memory.
inline constexpr double kConstructionTolerance = 1e-9;
/// Tolerance applied to externally loaded data.
inline constexpr double kLoadTolerance = 1e-8;

/// Ordered factor dimensions (n_1, ..., n_N) of H_1 (x) ... (x) H_N, N >= 2.
class SpaceShape {
 public:
  explicit SpaceShape(std::vector<std::size_t> dims);

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t dim(std::size_t slot) const;
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t total_dim() const noexcept { return total_; }

  /// n_1 * ... * n_{N-1}: dimension of everything but the last slot.
  std::size_t leading_dim() const noexcept { return total_ / dims_.back(); }
  std::size_t last_dim() const noexcept { return dims_.back(); }

  /// True when n_N >= n_1 * ... * n_{N-1} in the given slot order.
  bool admits_maximal_form() const noexcept { return last_dim() >= leading_dim(); }

  /// The same factors sorted ascending.
  SpaceShape sorted() const;

  std::string to_string() const;

  friend bool operator==(const SpaceShape&, const SpaceShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Row-major flattening, slot 1 slowest and slot N fastest.
std::size_t flatten_index(const SpaceShape& shape, std::span<const std::size_t> multi_index);
std::vector<std::size_t> unflatten_index(const SpaceShape& shape, std::size_t flat);

/// Dense complex tensor of arbitrary rank (>= 1) and arbitrary norm.
///
/// This is the working type of the norm algorithms; the domain types below
/// (PureState, operators) convert into it. Operators on N slots become
/// tensors on 2N slots ordered (out_1, in_1, ..., out_N, in_N).
class Tensor {
 public:
  Tensor(std::vector<std::size_t> dims, CVector data);

  static Tensor zeros(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(data_.size()); }
  const CVector& data() const noexcept { return data_; }
  CVector& data() noexcept { return data_; }
  double norm() const { return data_.norm(); }

  /// New slot k is old slot order[k].
  Tensor permuted(std::span<const std::size_t> order) const;

  /// Rows indexed by row_slots (in the given order), columns by the
  /// remaining slots in ascending order.
  CMatrix matricize(std::span<const std::size_t> row_slots) const;

  /// Inverse of matricize for the same dims and row_slots.
  static Tensor from_matrix(std::vector<std::size_t> dims, std::span<const std::size_t> row_slots,
                            const CMatrix& matrix);

  /// Contract every slot except `free` against conj(factors[k]).
  ///
  /// With p = (x)_k factors[k], the overlap <p, t> equals
  /// factors[free]^H * result.
  CVector contract_except(std::span<const CVector> factors, std::size_t free) const;

  /// Contract one slot against conj(v); the result has rank - 1 slots.
  Tensor contract_slot(std::size_t slot, const CVector& v) const;

 private:
  std::vector<std::size_t> dims_;
  CVector data_;
};

/// Product of the entries of `dims`.
std::size_t product_of(std::span<const std::size_t> dims);

/// A decomposable unit vector a_1 (x) ... (x) a_N, one factor per slot.
class ProductVector {
 public:
  /// Every factor must have unit norm within kConstructionTolerance.
  explicit ProductVector(std::vector<CVector> factors);

  /// Normalizes each factor first; throws on a zero factor.
  static ProductVector normalized(std::vector<CVector> factors);

  std::size_t rank() const noexcept { return factors_.size(); }
  const std::vector<CVector>& factors() const noexcept { return factors_; }
  const CVector& factor(std::size_t slot) const { return factors_.at(slot); }
  std::vector<std::size_t> dims() const;

  /// Dense expansion as a Tensor.
  Tensor expand() const;

  /// <p, t> = sum conj(p) * t.
  Complex overlap(const Tensor& t) const;

 private:
  std::vector<CVector> factors_;
};

/// Unit vector over a SpaceShape.
class PureState {
 public:
  PureState(SpaceShape shape, CVector amplitudes, double tolerance = kConstructionTolerance);

  /// Scales a nonzero vector to unit norm.
  static PureState normalized(SpaceShape shape, CVector amplitudes);

  const SpaceShape& shape() const noexcept { return shape_; }
  const CVector& amplitudes() const noexcept { return amplitudes_; }
  Tensor as_tensor() const { return Tensor(shape_.dims(), amplitudes_); }

 private:
  SpaceShape shape_;
  CVector amplitudes_;
};

/// Positive unit-trace operator on a SpaceShape.
class DensityOperator {
 public:
  DensityOperator(SpaceShape shape, CMatrix matrix, double tolerance = kConstructionTolerance);

  static DensityOperator from_pure(const PureState& state);
  /// sum_k w_k |psi_k><psi_k|; weights must be nonnegative and sum to one.
  static DensityOperator mixture(std::span<const double> weights, std::span<const PureState> states);

  const SpaceShape& shape() const noexcept { return shape_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  SpaceShape shape_;
  CMatrix matrix_;
};

/// Hermitian test operator on a SpaceShape.
class HermitianOperator {
 public:
  HermitianOperator(SpaceShape shape, CMatrix matrix, double tolerance = kConstructionTolerance);

  const SpaceShape& shape() const noexcept { return shape_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

 private:
  SpaceShape shape_;
  CMatrix matrix_;
};

/// Reduced operator on grouped slots; may have a single slot.
struct Marginal {
  std::vector<std::size_t> dims;
  CMatrix matrix;
};

PureState expand_product(const ProductVector& p, const SpaceShape& shape);

/// (n_1...n_k) x (n_{k+1}...n_N) matrix; 1 <= split <= N-1.
CMatrix matricize(const PureState& state, std::size_t split);

/// Trace out slot N.
Marginal partial_trace_last(const DensityOperator& rho);

/// Operator on N slots as a tensor on 2N slots (out_1, in_1, ..., out_N, in_N).
Tensor operator_as_tensor(const CMatrix& op, const SpaceShape& shape);
/// Inverse of operator_as_tensor.
CMatrix operator_from_tensor(const Tensor& t, const SpaceShape& shape);

/// Apply a local operator to one slot of a state vector (not renormalized).
CVector apply_local(const SpaceShape& shape, const CVector& amplitudes, std::size_t slot,
                    const CMatrix& local);

/// Move slots into a new order; new slot k is old slot order[k].
PureState permute_slots(const PureState& state, std::span<const std::size_t> order);

// ---------------------------------------------------------------------------
// Seeded randomness. Each call owns its generator; no shared state.

/// splitmix64 mix of (seed, stream); used to derive per-restart seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Independent standard complex Gaussian entries.
CVector random_gaussian_vector(std::size_t n, std::uint64_t seed);
/// Uniform on the unit sphere of C^n.
CVector random_unit_vector(std::size_t n, std::uint64_t seed);
PureState random_state(const SpaceShape& shape, std::uint64_t seed);
ProductVector random_product(std::span<const std::size_t> dims, std::uint64_t seed);
ProductVector random_product(const SpaceShape& shape, std::uint64_t seed);
/// Haar-distributed unitary of size n.
CMatrix random_unitary(std::size_t n, std::uint64_t seed);
/// n x m matrix with orthonormal columns (m <= n), Haar distributed.
CMatrix random_isometry(std::size_t n, std::size_t m, std::uint64_t seed);
/// G G^H / tr(G G^H) for a total_dim x rank Ginibre matrix G (rank 0 means full).
DensityOperator random_density(const SpaceShape& shape, std::uint64_t seed, std::size_t rank = 0);

}  // namespace entgeom
