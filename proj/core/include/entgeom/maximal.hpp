#pragma once

#include <cstdint>
#include <string>

#include "entgeom/projective.hpp"

namespace entgeom {

/// xi = (1/sqrt(m)) sum_k e_k (x) f_k with {e_k} a basis of the first N-1
/// grouped slots (m = n_1...n_{N-1}) and {f_k} orthonormal in slot N.
struct MaximalForm {
  SpaceShape shape;
  /// m x m unitary; column k is e_k.
  CMatrix left_basis;
  /// n_N x m isometry; column k is f_k.
  CMatrix right_frame;

  /// Throws InvariantError if either frame is off by more than 1e-9.
  void validate() const;
  PureState state() const;
};

/// Standard bases on both sides.
MaximalForm canonical_maximal_form(const SpaceShape& shape);
/// Haar-random frames drawn from `seed`.
MaximalForm random_maximal_form(const SpaceShape& shape, std::uint64_t seed);

/// Throws UnsupportedShapeError unless n_N >= n_1...n_{N-1}.
PureState make_maximal(const SpaceShape& shape, std::uint64_t seed);

/// r(V) = 1/sqrt(n_1...n_{N-1}) when the largest factor dominates the rest.
std::optional<double> closed_form_inner_radius(const SpaceShape& shape);

enum class MaximalityVerdict { maximal, probably_maximal, not_maximal, unknown_inner_radius };

const char* to_string(MaximalityVerdict v) noexcept;

/// The three extremal quantities of a unit vector.
struct MaximalityEvidence {
  NormBracket injective;
  NormBracket projective;
  NormBracket distance;
  double inner_radius = 0.0;

  /// Each certified to sit at its extremal value within tol.
  bool injective_extremal(double tol) const;
  bool projective_extremal(double tol) const;
  bool distance_extremal(double tol) const;
  /// Each certified to miss its extremal value by more than tol.
  bool injective_excluded(double tol) const;
  bool projective_excluded(double tol) const;
  bool distance_excluded(double tol) const;
};

struct MaximalityReport {
  MaximalityVerdict verdict = MaximalityVerdict::unknown_inner_radius;
  /// Absent for unknown_inner_radius.
  std::optional<MaximalityEvidence> evidence;
};

/// Maximal iff the certified injective upper endpoint is within tol of r(V).
/// A match of the heuristic lower endpoint alone gives probably_maximal.
MaximalityReport is_maximal(const PureState& state, const SolverOptions& opts = {}, double tol = 1e-6);

struct PurificationReport {
  bool purifies = false;
  /// max |M_ij - delta_ij / m| for M the marginal on the first N-1 slots.
  double deviation = 0.0;
};

PurificationReport purification_check(const PureState& state, double tol = 1e-8);

/// Unitary U on slot N with (I (x) U) xi1 = xi2. Both inputs must purify the
/// tracial state within 1e-6; otherwise PreconditionError.
CMatrix connect_maximal(const PureState& xi1, const PureState& xi2);

struct RefinementReport {
  MaximalityReport fine;
  /// Same vector on shape (n_1...n_{N-1}, n_N).
  MaximalityReport coarse;
  bool agree() const noexcept { return fine.verdict == coarse.verdict; }
};

RefinementReport refinement_agreement(const PureState& state, const SolverOptions& opts = {}, double tol = 1e-6);

}  // namespace entgeom
