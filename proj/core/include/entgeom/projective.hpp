#pragma once

#include <optional>
#include <vector>

#include "entgeom/injective.hpp"

namespace entgeom {

struct ProductTerm {
  Complex coefficient;
  ProductVector product;
};

/// sum_k c_k p_k over unit product vectors p_k; its cost sum |c_k| bounds
/// the projective norm of whatever it reconstructs.
struct ProductDecomposition {
  std::vector<ProductTerm> terms;

  double cost() const;
  std::size_t size() const noexcept { return terms.size(); }
  /// Dense sum; `dims` is used when the decomposition is empty.
  Tensor reconstruct(const std::vector<std::size_t>& dims) const;
};

struct ProjectiveResult {
  NormBracket bracket;
  /// Upper certificate. bracket.upper = cost + penalty for the residual.
  ProductDecomposition decomposition;
  /// || target - decomposition ||.
  double residual = 0.0;
  /// Lower certificate: bracket.lower = |<dual, target>| / dual_injective_upper.
  std::optional<Tensor> dual;
  double dual_injective_upper = 0.0;
};

/// Projective (greatest cross) norm of any nonzero tensor.
ProjectiveResult projective_norm(const Tensor& t, const SolverOptions& opts = {});
ProjectiveResult projective_norm(const PureState& state, const SolverOptions& opts = {});

/// Same as projective_norm but never takes the two-slot SVD shortcut; used
/// to cross-check the multi-slot machinery against the exact bipartite value.
ProjectiveResult projective_norm_generic(const Tensor& t, const SolverOptions& opts = {});

/// t = sum_i e_i (x) v_i over the standard basis of every slot except `free_slot`.
ProductDecomposition slice_decomposition(const Tensor& t, std::size_t free_slot);

/// Recursive Schmidt decomposition; the top-level cut puts slots [0, split)
/// on the left (split = 0 picks the cut with the smallest nuclear norm).
/// Returns nullopt when the term count would exceed `max_terms`.
std::optional<ProductDecomposition> schmidt_tree_decomposition(const Tensor& t, std::size_t split,
                                                               std::size_t max_terms = 4096);

/// sqrt(prod(dims) / max(dims)): ||t||_gamma <= this * ||t|| for every t.
double projective_cap_factor(const std::vector<std::size_t>& dims);

struct DecomposabilityResult {
  bool decomposable = false;
  /// Nearest product vector when decomposable.
  std::optional<ProductVector> certificate;
  NormBracket injective;
};

/// xi is in V iff ||xi||_V = 1; decided as injective lower >= 1 - tol.
DecomposabilityResult is_decomposable(const PureState& state, const SolverOptions& opts, double tol);

enum class HullVerdict { inside, outside, undecided };

struct HullResult {
  HullVerdict verdict = HullVerdict::undecided;
  NormBracket bracket;
};

/// Membership of a vector of any norm in the closed convex hull of V, i.e.
/// the projective unit ball, with one-sided tolerance 1e-9.
HullResult hull_membership(const SpaceShape& shape, const CVector& vector, const SolverOptions& opts = {});

const char* to_string(HullVerdict v) noexcept;

}  // namespace entgeom
