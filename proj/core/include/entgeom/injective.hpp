#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entgeom/tensor.hpp"

namespace entgeom {

struct SolverOptions {
  int restarts = 64;
  int max_iterations = 500;
  double tolerance = 1e-10;
  std::uint64_t seed = 0;
  /// Cell budget of the certified Bloch-sphere cover that tightens upper
  /// endpoints on three-slot tensors with a qubit slot. 0 disables it.
  std::size_t cover_budget = 200000;
  /// The cover stops once its bound is within this of the best lower value.
  double cover_tolerance = 1e-6;

  /// Throws PreconditionError unless restarts >= 1, tolerance > 0, max_iterations >= 1.
  void validate() const;
};

/// Certified interval [lower, upper] for a norm value.
struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  /// Product vector attaining `lower`, when the lower endpoint is an overlap.
  std::optional<ProductVector> lower_certificate;
  /// How the upper endpoint was obtained.
  std::string upper_certificate;
  int iterations = 0;
  int restarts_used = 0;

  double width() const noexcept { return upper - lower; }
  double midpoint() const noexcept { return 0.5 * (lower + upper); }
  bool contains(double value, double slack = 0.0) const noexcept {
    return value >= lower - slack && value <= upper + slack;
  }
};

/// Result of one alternating-maximization run.
struct AscentResult {
  std::vector<CVector> factors;
  double value = 0.0;
  int iterations = 0;
};

/// Higher-order power iteration for sup |<p, t>| over unit product vectors p,
/// started from `start`. Each step replaces one factor by the normalized
/// contraction of t against all other factors.
AscentResult alternating_ascent(const Tensor& t, std::vector<CVector> start, int max_iterations, double tolerance);

/// Multi-start alternating ascent; returns the best run (first one on ties).
AscentResult best_product_overlap(const Tensor& t, const SolverOptions& opts, int* restarts_used = nullptr);

struct UpperBound {
  double value = 0.0;
  std::string description;
};

/// min over all slot bipartitions S|S^c of sigma_max(matricize(t, S)).
UpperBound bipartition_upper_bound(const Tensor& t);

/// Best certified upper bound on ||t||_V: bipartition bound, tightened by the
/// sphere cover when it applies and the gap to `known_lower` is open.
UpperBound injective_upper_bound(const Tensor& t, const SolverOptions& opts, double known_lower);

/// ||t||_V = sup over unit product vectors p of |<p, t>| for any nonzero tensor.
NormBracket injective_norm(const Tensor& t, const SolverOptions& opts = {});
NormBracket injective_norm(const PureState& state, const SolverOptions& opts = {});

struct NearestProduct {
  ProductVector product;
  double overlap = 0.0;
};

/// The product vector behind the lower endpoint of injective_norm.
NearestProduct nearest_product(const PureState& state, const SolverOptions& opts = {});

/// d(xi, V) = sqrt(2 - 2 ||xi||_V) as a bracket.
NormBracket distance_to_V(const PureState& state, const SolverOptions& opts = {});

struct OperatorNormBracket {
  NormBracket bracket;
  /// |<X in, out>| = bracket.lower when present.
  std::optional<ProductVector> out_vector;
  std::optional<ProductVector> in_vector;
};

/// ||X||_V = sup over unit product vectors xi, eta of |<X xi, eta>|.
OperatorNormBracket operator_injective_norm(const CMatrix& op, const SpaceShape& shape,
                                            const SolverOptions& opts = {});
OperatorNormBracket operator_injective_norm(const HermitianOperator& op, const SolverOptions& opts = {});

}  // namespace entgeom
