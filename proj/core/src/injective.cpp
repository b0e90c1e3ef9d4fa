#include "entgeom/injective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entgeom/linalg.hpp"
#include "entgeom/sphere_cover.hpp"

namespace entgeom {

namespace {

constexpr std::size_t kMaxBipartitionRank = 12;

std::string slot_set(const std::vector<std::size_t>& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < s.size(); ++k) os << (k ? "," : "") << s[k] + 1;
  os << '}';
  return os.str();
}

void require_nonzero(const Tensor& t) {
  const double n = t.norm();
  if (!std::isfinite(n)) throw InvariantError("injective_norm: tensor has non-finite entries");
  if (n == 0.0) throw InvariantError("injective_norm: zero tensor is not accepted");
}

void require_unit(const PureState& s) {
  // PureState already enforces unit norm; this guards states built with a
  // loose load tolerance.
  if (std::abs(s.amplitudes().norm() - 1.0) > kLoadTolerance) {
    throw InvariantError("injective_norm: state is not a unit vector");
  }
}

std::vector<CVector> leading_singular_start(const Tensor& t) {
  std::vector<CVector> factors;
  for (std::size_t s = 0; s < t.rank(); ++s) {
    const std::size_t rows[] = {s};
    const auto dec = linalg::svd(t.matricize(rows));
    factors.push_back(dec.u.col(0));
  }
  return factors;
}

std::vector<CVector> random_start(const Tensor& t, std::uint64_t seed) {
  return random_product(std::span<const std::size_t>(t.dims()), seed).factors();
}

}  // namespace

void SolverOptions::validate() const {
  if (restarts < 1) throw PreconditionError("SolverOptions: restarts must be >= 1");
  if (max_iterations < 1) throw PreconditionError("SolverOptions: max_iterations must be >= 1");
  if (!(tolerance > 0.0)) throw PreconditionError("SolverOptions: tolerance must be > 0");
}

AscentResult alternating_ascent(const Tensor& t, std::vector<CVector> start, int max_iterations, double tolerance) {
  AscentResult r;
  r.factors = std::move(start);
  double previous = -1.0;
  for (int it = 0; it < max_iterations; ++it) {
    double value = 0.0;
    for (std::size_t s = 0; s < t.rank(); ++s) {
      CVector v = t.contract_except(r.factors, s);
      value = v.norm();
      if (value > 0.0) r.factors[s] = v / value;
    }
    r.iterations = it + 1;
    r.value = value;
    if (value - previous < tolerance) break;
    previous = value;
  }
  // Recompute from the final factors so the value is exactly reproducible.
  r.value = std::abs(r.factors[0].dot(t.contract_except(r.factors, 0)));
  return r;
}

AscentResult best_product_overlap(const Tensor& t, const SolverOptions& opts, int* restarts_used) {
  AscentResult best;
  best.value = -1.0;
  const UpperBound cap = bipartition_upper_bound(t);
  int used = 0;
  for (int r = 0; r < opts.restarts; ++r) {
    auto start = r == 0 ? leading_singular_start(t) : random_start(t, derive_seed(opts.seed, r));
    AscentResult run = alternating_ascent(t, std::move(start), opts.max_iterations, opts.tolerance);
    ++used;
    if (run.value > best.value) best = std::move(run);
    // Nothing left to gain once the ascent meets the certified bound.
    if (cap.value - best.value <= opts.tolerance) break;
  }
  if (restarts_used) *restarts_used = used;
  return best;
}

UpperBound bipartition_upper_bound(const Tensor& t) {
  if (t.rank() == 1) return {t.norm(), "vector norm"};
  UpperBound best{std::numeric_limits<double>::infinity(), ""};
  if (t.rank() > kMaxBipartitionRank) {
    return {t.norm(), "Euclidean norm"};
  }
  for (const auto& s : linalg::bipartitions(t.rank())) {
    const double v = linalg::sigma_max(t.matricize(s));
    if (v < best.value) best = {v, "spectral norm of bipartition " + slot_set(s)};
  }
  return best;
}

UpperBound injective_upper_bound(const Tensor& t, const SolverOptions& opts, double known_lower) {
  UpperBound best = bipartition_upper_bound(t);
  if (t.rank() != 3 || opts.cover_budget == 0 || best.value - known_lower <= opts.cover_tolerance) return best;
  for (std::size_t slot = 0; slot < t.rank(); ++slot) {
    if (t.dims()[slot] != 2) continue;
    auto cover = sphere_cover_bound(t, slot, known_lower, opts.cover_budget, opts.cover_tolerance);
    if (cover && cover->upper < best.value) {
      std::ostringstream os;
      os << "Bloch-sphere cover of slot " << slot + 1 << " (" << cover->evaluations << " cells"
         << (cover->converged ? "" : ", budget exhausted") << ")";
      best = {cover->upper, os.str()};
    }
    break;
  }
  return best;
}

NormBracket injective_norm(const Tensor& t, const SolverOptions& opts) {
  opts.validate();
  require_nonzero(t);
  NormBracket out;

  if (t.rank() == 1) {
    out.lower = out.upper = t.norm();
    out.lower_certificate = ProductVector({t.data() / t.norm()});
    out.upper_certificate = "vector norm";
    return out;
  }

  if (t.rank() == 2) {
    const std::size_t rows[] = {0};
    const auto dec = linalg::svd(t.matricize(rows));
    // <a (x) b, t> = a^H M conj(b), maximized by the top singular pair.
    ProductVector p({dec.u.col(0), dec.v.col(0).conjugate()});
    out.lower = std::abs(p.overlap(t));
    out.upper = std::max(dec.s(0), out.lower);
    out.lower_certificate = std::move(p);
    out.upper_certificate = "largest singular value (exact for two slots)";
    out.restarts_used = 0;
    return out;
  }

  int used = 0;
  AscentResult best = best_product_overlap(t, opts, &used);
  out.lower = best.value;
  out.iterations = best.iterations;
  out.restarts_used = used;
  out.lower_certificate = ProductVector::normalized(std::move(best.factors));
  const UpperBound ub = injective_upper_bound(t, opts, out.lower);
  out.upper = std::max(ub.value, out.lower);
  out.upper_certificate = ub.description;
  return out;
}

NormBracket injective_norm(const PureState& state, const SolverOptions& opts) {
  require_unit(state);
  return injective_norm(state.as_tensor(), opts);
}

NearestProduct nearest_product(const PureState& state, const SolverOptions& opts) {
  NormBracket b = injective_norm(state, opts);
  return {std::move(*b.lower_certificate), b.lower};
}

NormBracket distance_to_V(const PureState& state, const SolverOptions& opts) {
  NormBracket inj = injective_norm(state, opts);
  auto dist = [](double v) { return std::sqrt(std::max(0.0, 2.0 - 2.0 * v)); };
  NormBracket out = inj;
  out.lower = dist(inj.upper);
  out.upper = dist(inj.lower);
  out.upper_certificate = "sqrt(2 - 2 x) applied to the injective bracket (" + inj.upper_certificate + ")";
  return out;
}

OperatorNormBracket operator_injective_norm(const CMatrix& op, const SpaceShape& shape, const SolverOptions& opts) {
  const Tensor t = operator_as_tensor(op, shape);
  OperatorNormBracket out;
  if (t.norm() == 0.0) {
    out.bracket.upper_certificate = "zero operator";
    return out;
  }
  out.bracket = injective_norm(t, opts);
  if (out.bracket.lower_certificate) {
    // Tensor factors alternate (out_k, in_k); the overlap is
    // sum conj(b) X conj(c) = <X xi, eta> with eta = (x) b_k, xi = (x) conj(c_k).
    const auto& f = out.bracket.lower_certificate->factors();
    std::vector<CVector> outs;
    std::vector<CVector> ins;
    for (std::size_t k = 0; k < shape.rank(); ++k) {
      outs.push_back(f[2 * k]);
      ins.push_back(f[2 * k + 1].conjugate());
    }
    out.out_vector = ProductVector(std::move(outs));
    out.in_vector = ProductVector(std::move(ins));
  }
  return out;
}

OperatorNormBracket operator_injective_norm(const HermitianOperator& op, const SolverOptions& opts) {
  return operator_injective_norm(op.matrix(), op.shape(), opts);
}

}  // namespace entgeom
