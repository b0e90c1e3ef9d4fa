#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "entgeom/injective.hpp"

namespace entgeom {

/// Largest side D accepted by build_divergent.
inline constexpr std::size_t kDivergenceMaxSide = 2048;
/// Dense amplitudes are only formed up to this side.
inline constexpr std::size_t kDivergenceMaxDenseSide = 1024;

struct DivergenceRow {
  int k = 0;
  std::size_t block_dim = 0;  // n_k
  double theta = 0.0;         // theta_k
  /// sqrt(theta_k n_k): nuclear norm of the k-th summand, a lower bound for the full vector.
  double block_bound = 0.0;
  /// sum_{j <= k} sqrt(theta_j n_j).
  double cumulative_nuclear = 0.0;
  /// Injective bracket of the unweighted block sum_j e_j (x) f_j.
  NormBracket block_injective;
};

struct DivergentState {
  std::size_t side = 0;
  /// Diagonal Schmidt coefficients of the normalized truncation, one per index.
  Eigen::VectorXd schmidt;
  /// Norm of the truncation before normalization: sqrt(sum theta_k).
  double raw_norm = 0.0;
  /// Exact nuclear norm before normalization.
  double nuclear_norm = 0.0;
  std::vector<DivergenceRow> rows;
  /// Dense amplitudes on (D, D); absent above kDivergenceMaxDenseSide.
  std::optional<PureState> state;

  /// Projective norm of the normalized truncation.
  double normalized_nuclear_norm() const { return nuclear_norm / raw_norm; }
};

/// xi = sum_{k<=K} sqrt(theta_k / n_k) sum_{j in S_k} e_j (x) f_j with
/// theta_k = theta_base^k and n_k = dim_base^k on disjoint blocks S_k.
/// Throws PreconditionError for K < 1 or bad bases, ShapeError when D exceeds
/// kDivergenceMaxSide.
DivergentState build_divergent(int k_max, double theta_base = 0.5, std::size_t dim_base = 4,
                               const SolverOptions& opts = {});

}  // namespace entgeom
