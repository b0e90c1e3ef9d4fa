#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entgeom/injective.hpp"

namespace entgeom {

enum class RadiusMode { closed_form, search };

const char* to_string(RadiusMode m) noexcept;

struct InnerRadiusResult {
  NormBracket bracket;
  RadiusMode mode = RadiusMode::closed_form;
  /// Unit vector whose certified injective upper endpoint is bracket.upper
  /// (absent when the grouping cap is the best upper endpoint found).
  std::optional<PureState> minimizer;
  /// Set when r(V) > bracket.lower is known to hold strictly.
  bool strict_lower = false;
  /// Label of the candidate family that produced bracket.upper.
  std::string minimizer_origin;
};

/// r(V) = min of ||xi||_V over unit xi.
///
/// Closed form 1/sqrt(n_1...n_{N-1}) (dims sorted ascending) when the largest
/// factor dominates the product of the others, unless `force_search`. Search
/// mode: lower = 1/sqrt(n_1...n_{N-1}); upper = the smallest certified
/// injective upper endpoint over descended candidates (structured vectors and
/// opts.restarts random states), capped by the coarsest two-slot grouping.
InnerRadiusResult inner_radius(const SpaceShape& shape, const SolverOptions& opts = {}, bool force_search = false);

/// sup over unit xi of d(xi, V) = sqrt(2 (1 - r(V))), endpoints swapped.
NormBracket sup_distance(const SpaceShape& shape, const SolverOptions& opts = {}, bool force_search = false);

/// Smoothed-max descent on the unit sphere from `start`; returns the final
/// iterate. Exposed for tests and benchmarks.
PureState descend_injective(const PureState& start, const SolverOptions& opts, int iterations = 200);

struct VBallSample {
  std::string label;
  /// ||X|| / (certified upper bound on ||X||_V) for X = |zeta><zeta|.
  double ratio = 0.0;
};

struct VBallReport {
  double target = 0.0;  // r(V)^-2
  std::vector<VBallSample> samples;
  double best_ratio = 0.0;
  /// best_ratio >= target - 1e-6 and no sample above target + 1e-6.
  bool achieved = false;
};

/// Ratios ||X|| / ||X||_V for rank-one X at the constructed minimizer, a
/// product vector and a random state. Throws UnsupportedShapeError unless
/// r(V) is known in closed form.
VBallReport vball_sup_check(const SpaceShape& shape, const SolverOptions& opts = {});

}  // namespace entgeom
