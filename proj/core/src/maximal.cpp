#include "entgeom/maximal.hpp"

#include <cmath>

#include "entgeom/errors.hpp"
#include "entgeom/linalg.hpp"

namespace entgeom {

namespace {

constexpr double kFrameTolerance = 1e-9;
constexpr double kConnectTolerance = 1e-6;

void require_maximal_shape(const SpaceShape& shape, const char* what) {
  if (!shape.admits_maximal_form()) {
    throw UnsupportedShapeError(std::string(what) + ": shape " + shape.to_string() +
                                " has n_N < n_1...n_{N-1}; maximal vectors of the form "
                                "sum e_k (x) f_k need n_N >= n_1...n_{N-1}");
  }
}

// Rows of sqrt(m) A for A the m x n_N matricization; orthonormal for purifications.
CMatrix scaled_rows(const PureState& state) {
  const SpaceShape& shape = state.shape();
  const double m = static_cast<double>(shape.leading_dim());
  return std::sqrt(m) * matricize(state, shape.rank() - 1);
}

}  // namespace

void MaximalForm::validate() const {
  const auto m = static_cast<Eigen::Index>(shape.leading_dim());
  const auto n = static_cast<Eigen::Index>(shape.last_dim());
  if (left_basis.rows() != m || left_basis.cols() != m || right_frame.rows() != n || right_frame.cols() != m) {
    throw ShapeError("MaximalForm: frames do not match " + shape.to_string());
  }
  const double left = linalg::max_abs_entry(left_basis.adjoint() * left_basis - CMatrix::Identity(m, m));
  const double right = linalg::max_abs_entry(right_frame.adjoint() * right_frame - CMatrix::Identity(m, m));
  if (left > kFrameTolerance) throw InvariantError("MaximalForm: left basis is not unitary");
  if (right > kFrameTolerance) throw InvariantError("MaximalForm: right frame is not orthonormal");
}

PureState MaximalForm::state() const {
  validate();
  const double m = static_cast<double>(shape.leading_dim());
  // Row-major reshape of (1/sqrt(m)) sum_k e_k f_k^T.
  const CMatrix a = left_basis * right_frame.transpose() / std::sqrt(m);
  CVector amplitudes(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i) amplitudes.segment(i * a.cols(), a.cols()) = a.row(i).transpose();
  return PureState(shape, std::move(amplitudes));
}

MaximalForm canonical_maximal_form(const SpaceShape& shape) {
  require_maximal_shape(shape, "canonical_maximal_form");
  const auto m = static_cast<Eigen::Index>(shape.leading_dim());
  const auto n = static_cast<Eigen::Index>(shape.last_dim());
  return {shape, CMatrix::Identity(m, m), CMatrix::Identity(n, m)};
}

MaximalForm random_maximal_form(const SpaceShape& shape, std::uint64_t seed) {
  require_maximal_shape(shape, "random_maximal_form");
  const std::size_t m = shape.leading_dim();
  return {shape, random_unitary(m, derive_seed(seed, 0)), random_isometry(shape.last_dim(), m, derive_seed(seed, 1))};
}

PureState make_maximal(const SpaceShape& shape, std::uint64_t seed) {
  require_maximal_shape(shape, "make_maximal");
  return random_maximal_form(shape, seed).state();
}

std::optional<double> closed_form_inner_radius(const SpaceShape& shape) {
  const SpaceShape s = shape.sorted();
  if (!s.admits_maximal_form()) return std::nullopt;
  return 1.0 / std::sqrt(static_cast<double>(s.leading_dim()));
}

const char* to_string(MaximalityVerdict v) noexcept {
  switch (v) {
    case MaximalityVerdict::maximal: return "maximal";
    case MaximalityVerdict::probably_maximal: return "probably-maximal";
    case MaximalityVerdict::not_maximal: return "not-maximal";
    case MaximalityVerdict::unknown_inner_radius: return "unknown-inner-radius";
  }
  return "unknown-inner-radius";
}

bool MaximalityEvidence::injective_extremal(double tol) const {
  return injective.upper <= inner_radius + tol && injective.lower >= inner_radius - tol;
}

bool MaximalityEvidence::projective_extremal(double tol) const {
  return projective.lower >= 1.0 / inner_radius - tol && projective.upper <= 1.0 / inner_radius + tol;
}

bool MaximalityEvidence::distance_extremal(double tol) const {
  const double target = std::sqrt(2.0 * (1.0 - inner_radius));
  return distance.lower >= target - tol && distance.upper <= target + tol;
}

bool MaximalityEvidence::injective_excluded(double tol) const { return injective.lower > inner_radius + tol; }

bool MaximalityEvidence::projective_excluded(double tol) const {
  return projective.upper < 1.0 / inner_radius - tol;
}

bool MaximalityEvidence::distance_excluded(double tol) const {
  return distance.upper < std::sqrt(2.0 * (1.0 - inner_radius)) - tol;
}

MaximalityReport is_maximal(const PureState& state, const SolverOptions& opts, double tol) {
  MaximalityReport report;
  const auto r = closed_form_inner_radius(state.shape());
  if (!r) return report;

  MaximalityEvidence ev;
  ev.inner_radius = *r;
  ev.injective = injective_norm(state, opts);
  ev.projective = projective_norm(state, opts).bracket;
  ev.distance.lower = std::sqrt(std::max(0.0, 2.0 - 2.0 * ev.injective.upper));
  ev.distance.upper = std::sqrt(std::max(0.0, 2.0 - 2.0 * ev.injective.lower));
  ev.distance.upper_certificate = "sqrt(2 - 2 x injective lower)";

  if (ev.injective.upper <= *r + tol) {
    report.verdict = MaximalityVerdict::maximal;
  } else if (ev.injective.lower <= *r + tol) {
    report.verdict = MaximalityVerdict::probably_maximal;
  } else {
    report.verdict = MaximalityVerdict::not_maximal;
  }
  report.evidence = std::move(ev);
  return report;
}

PurificationReport purification_check(const PureState& state, double tol) {
  const CMatrix a = matricize(state, state.shape().rank() - 1);
  const auto m = a.rows();
  const CMatrix marginal = a * a.adjoint();
  PurificationReport out;
  out.deviation = linalg::max_abs_entry(marginal - CMatrix::Identity(m, m) / static_cast<double>(m));
  out.purifies = out.deviation <= tol;
  return out;
}

CMatrix connect_maximal(const PureState& xi1, const PureState& xi2) {
  if (!(xi1.shape() == xi2.shape())) throw ShapeError("connect_maximal: shapes differ");
  require_maximal_shape(xi1.shape(), "connect_maximal");
  if (!purification_check(xi1, kConnectTolerance).purifies || !purification_check(xi2, kConnectTolerance).purifies) {
    throw PreconditionError("connect_maximal: both vectors must purify the tracial state (tolerance 1e-6)");
  }
  // (I (x) U) acts on the matricization as A -> A U^T. With R_i = sqrt(m) A_i
  // having orthonormal rows and Q_i completing them, U^T = R1^H R2 + Q1^H Q2.
  const CMatrix r1 = scaled_rows(xi1);
  const CMatrix r2 = scaled_rows(xi2);
  const CMatrix q1 = linalg::orthonormal_complement(r1.adjoint()).adjoint();
  const CMatrix q2 = linalg::orthonormal_complement(r2.adjoint()).adjoint();
  CMatrix ut = r1.adjoint() * r2;
  if (q1.rows() > 0) ut += q1.adjoint() * q2;
  return ut.transpose();
}

RefinementReport refinement_agreement(const PureState& state, const SolverOptions& opts, double tol) {
  const SpaceShape& fine = state.shape();
  const SpaceShape coarse({fine.leading_dim(), fine.last_dim()});
  RefinementReport out;
  out.fine = is_maximal(state, opts, tol);
  out.coarse = is_maximal(PureState(coarse, state.amplitudes()), opts, tol);
  return out;
}

}  // namespace entgeom
