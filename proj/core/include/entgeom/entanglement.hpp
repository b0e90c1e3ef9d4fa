#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entgeom/maximal.hpp"

namespace entgeom {

/// Hermitian X with a certified bound on ||X||_V; value = tr(rho X) / vnorm_upper <= E(rho).
struct WitnessCertificate {
  HermitianOperator x;
  double vnorm_upper = 0.0;
  double value = 0.0;
  std::string origin;
};

/// sum_k w_k |p_k><p_k| approximating a density operator.
struct SeparableDecomposition {
  std::vector<double> weights;
  std::vector<ProductVector> states;
  /// Trace norm of target - sum_k w_k |p_k><p_k| before the weights were normalized.
  double residual = 0.0;
  /// sum_k w_k before normalization.
  double raw_weight = 0.0;

  CMatrix reconstruct(std::size_t total_dim) const;
};

struct SeparableSearchOptions {
  /// Hard cap on pooled atoms; 0 means 4 * total_dim^2.
  std::size_t max_atoms = 0;
  int rounds = 12;
  int fit_iterations = 2000;
};

/// Random product pool, nonnegative least squares, atoms added at the nearest
/// product of the residual's top eigenvector, then a joint least-squares fit
/// of the product factors. Always returns the best decomposition found.
SeparableDecomposition find_separable_decomposition(const DensityOperator& rho, const SolverOptions& opts = {},
                                                    const SeparableSearchOptions& search = {});

struct EntanglementResult {
  NormBracket bracket;
  std::optional<WitnessCertificate> witness;
  std::optional<SeparableDecomposition> separable;
  /// Signed product-operator decomposition behind bracket.upper, when it won.
  std::optional<ProductDecomposition> operator_decomposition;
};

/// E(rho) = sup |tr(rho X)| over ||X||_V <= 1, bracketed.
EntanglementResult entanglement(const DensityOperator& rho, const SolverOptions& opts = {});

/// E(|xi><xi|) = ||xi||_gamma^2: the projective bracket squared.
NormBracket pure_state_entanglement(const PureState& state, const SolverOptions& opts = {});

enum class StateVerdict { separable, entangled, maximally_entangled, undecided };

const char* to_string(StateVerdict v) noexcept;

struct Classification {
  StateVerdict verdict = StateVerdict::undecided;
  std::optional<WitnessCertificate> witness;
  std::optional<SeparableDecomposition> separable;
  /// Best lower endpoint found for E (1 when no witness beats it).
  double lower = 1.0;
};

/// Separable if a decomposition with trace-norm residual <= tol is found;
/// maximally entangled if a witness reaches r(V)^-2 - tol (closed-form
/// shapes only); entangled if a witness exceeds 1 + tol; else undecided.
Classification classify(const DensityOperator& rho, const SolverOptions& opts = {}, double tol = 1e-6);

/// Witnesses alone: rank-one operators at projective duals of the
/// eigenvectors of rho. Cheap; used by classify before any search.
std::optional<WitnessCertificate> rank_one_witness(const DensityOperator& rho, const SolverOptions& opts = {});

struct LipschitzReport {
  NormBracket e_rho;
  NormBracket e_sigma;
  double trace_distance = 0.0;  // ||rho - sigma||_1
  double constant = 0.0;        // r(V)^-2
  /// True only when the brackets prove |E(rho) - E(sigma)| > constant * distance + slack.
  bool violated = false;
  /// |midpoint difference|, for display.
  double midpoint_gap = 0.0;
};

/// Checks |E(rho) - E(sigma)| <= r(V)^-2 ||rho - sigma||_1 on closed-form shapes.
LipschitzReport lipschitz_check(const DensityOperator& rho, const DensityOperator& sigma,
                                const SolverOptions& opts = {}, double slack = 1e-6);
/// Same, reusing precomputed brackets.
LipschitzReport lipschitz_check(const DensityOperator& rho, const NormBracket& e_rho, const DensityOperator& sigma,
                                const NormBracket& e_sigma, double slack = 1e-6);

struct MixtureReport {
  NormBracket bracket;
  std::vector<MaximalityVerdict> components;
  double target = 0.0;  // r(V)^-2
  /// Lower endpoint reached r(V)^-2 - tol.
  bool reaches_maximal = false;
  /// Upper endpoint stayed below r(V)^-2 - tol.
  bool excluded = false;
  /// If reaches_maximal then every component must be maximal.
  bool consistent = true;
  std::string verdict;
};

/// rho = sum_k w_k |xi_k><xi_k|; a maximally entangled mixture needs maximal components.
MixtureReport mixture_component_check(const std::vector<double>& weights, const std::vector<PureState>& components,
                                      const SolverOptions& opts = {}, double tol = 1e-6);

}  // namespace entgeom
