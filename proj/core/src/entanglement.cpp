#include "entgeom/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entgeom/errors.hpp"
#include "entgeom/linalg.hpp"

namespace entgeom {

namespace {

// Largest operator-tensor size on which the signed-atom search runs.
constexpr std::size_t kOperatorSearchLimit = 256;
// Eigenvalues below this share of the trace use the a-priori cap instead of a
// projective computation in the spectral bound.
constexpr double kSpectralCutoff = 1e-6;
constexpr std::size_t kWitnessEigenvectors = 4;

// r(V)^-2 = n_1...n_{N-1} (sorted), kept exact instead of squaring 1/sqrt(m).
std::optional<double> max_entangled_value(const SpaceShape& shape) {
  if (!closed_form_inner_radius(shape)) return std::nullopt;
  return static_cast<double>(shape.sorted().leading_dim());
}

// W = Hermitian part of the phase-aligned X, normalized by a certified bound
// on ||X||_V (which also bounds ||W||_V).
WitnessCertificate make_witness(const DensityOperator& rho, CMatrix x, double vnorm_upper, std::string origin) {
  const Complex z = (rho.matrix() * x).trace();
  if (std::abs(z) > 0.0) x *= std::conj(z) / std::abs(z);
  CMatrix w = 0.5 * (x + x.adjoint());
  const double value = (rho.matrix() * w).trace().real() / vnorm_upper;
  return {HermitianOperator(rho.shape(), std::move(w)), vnorm_upper, value, std::move(origin)};
}

void keep_better(std::optional<WitnessCertificate>& best, std::optional<WitnessCertificate> candidate) {
  if (candidate && (!best || candidate->value > best->value)) best = std::move(candidate);
}

double penalty_for(const CMatrix& residual, const SpaceShape& shape) {
  // E is a norm; the residual is bounded through its Frobenius norm on the
  // 2N-slot tensor or through its eigen-expansion with the N-slot cap.
  std::vector<std::size_t> doubled;
  for (std::size_t d : shape.dims()) {
    doubled.push_back(d);
    doubled.push_back(d);
  }
  const double via_frobenius = projective_cap_factor(doubled) * residual.norm();
  const double cap = projective_cap_factor(shape.dims());
  const double via_trace = cap * cap * linalg::trace_norm_hermitian(residual);
  return std::min(via_frobenius, via_trace);
}

struct OperatorSearch {
  std::optional<WitnessCertificate> witness;
  double upper = 0.0;
  ProductDecomposition decomposition;
};

std::optional<OperatorSearch> operator_search(const DensityOperator& rho, const SolverOptions& opts) {
  const std::size_t size = rho.shape().total_dim() * rho.shape().total_dim();
  if (size > kOperatorSearchLimit) return std::nullopt;
  const Tensor t = operator_as_tensor(rho.matrix(), rho.shape());
  ProjectiveResult res = projective_norm(t, opts);
  OperatorSearch out;
  out.upper = res.bracket.upper;
  out.decomposition = std::move(res.decomposition);
  if (res.dual && res.dual_injective_upper > 0.0) {
    // <eta, rho~> = tr(rho M^H) with M the operator carried by eta.
    const CMatrix x = operator_from_tensor(*res.dual, rho.shape()).adjoint();
    out.witness = make_witness(rho, x, res.dual_injective_upper, "dual of the signed product-operator search");
  }
  return out;
}

double spectral_upper(const DensityOperator& rho, const SolverOptions& opts) {
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  const double cap = projective_cap_factor(rho.shape().dims());
  double total = 0.0;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    const double lambda = std::abs(eig.values(j));
    if (lambda == 0.0) continue;
    if (lambda < kSpectralCutoff) {
      total += lambda * cap * cap;
      continue;
    }
    const double g = projective_norm(Tensor(rho.shape().dims(), eig.vectors.col(j)), opts).bracket.upper;
    total += lambda * g * g;
  }
  return total;
}

}  // namespace

const char* to_string(StateVerdict v) noexcept {
  switch (v) {
    case StateVerdict::separable: return "separable";
    case StateVerdict::entangled: return "entangled";
    case StateVerdict::maximally_entangled: return "maximally-entangled";
    case StateVerdict::undecided: return "undecided";
  }
  return "undecided";
}

std::optional<WitnessCertificate> rank_one_witness(const DensityOperator& rho, const SolverOptions& opts) {
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  std::optional<WitnessCertificate> best;
  const Eigen::Index n = eig.values.size();
  for (Eigen::Index j = n; j-- > std::max<Eigen::Index>(0, n - static_cast<Eigen::Index>(kWitnessEigenvectors));) {
    if (eig.values(j) <= 1e-12) break;
    const ProjectiveResult pr = projective_norm(Tensor(rho.shape().dims(), eig.vectors.col(j)), opts);
    if (!pr.dual || pr.dual_injective_upper <= 0.0) continue;
    // X = |eta><eta| has ||X||_V = ||eta||_V^2.
    const CVector& eta = pr.dual->data();
    const double vnorm = pr.dual_injective_upper * pr.dual_injective_upper;
    keep_better(best, make_witness(rho, eta * eta.adjoint(), vnorm,
                                   "rank-one operator at the projective dual of eigenvector " + std::to_string(n - 1 - j)));
  }
  return best;
}

EntanglementResult entanglement(const DensityOperator& rho, const SolverOptions& opts) {
  opts.validate();
  const SpaceShape& shape = rho.shape();
  EntanglementResult out;
  out.bracket.lower = 1.0;
  out.bracket.upper = std::numeric_limits<double>::infinity();

  auto offer_upper = [&](double value, const std::string& label) {
    if (value < out.bracket.upper) {
      out.bracket.upper = value;
      out.bracket.upper_certificate = label;
      return true;
    }
    return false;
  };

  out.witness = rank_one_witness(rho, opts);
  if (const auto cap = max_entangled_value(shape)) offer_upper(*cap, "r(V)^-2 times the trace norm");
  offer_upper(spectral_upper(rho, opts), "eigen-expansion with projective upper endpoints");

  auto lower = [&] { return std::max(1.0, out.witness ? out.witness->value : 1.0); };
  if (out.bracket.upper - lower() > 1e-9) {
    SeparableDecomposition sep = find_separable_decomposition(rho, opts);
    const CMatrix residual = rho.matrix() - sep.reconstruct(shape.total_dim()) * sep.raw_weight;
    const double bound = sep.raw_weight + penalty_for(residual, shape);
    if (offer_upper(bound, "separable decomposition with residual penalty")) out.separable = std::move(sep);
  }
  if (out.bracket.upper - lower() > 1e-9) {
    if (auto search = operator_search(rho, opts)) {
      if (offer_upper(search->upper, "signed product-operator decomposition")) {
        out.operator_decomposition = std::move(search->decomposition);
        out.separable.reset();
      }
      keep_better(out.witness, std::move(search->witness));
    }
  }
  out.bracket.lower = lower();
  if (out.witness && out.witness->value >= 1.0) {
    out.bracket.upper_certificate += "; lower endpoint from " + out.witness->origin;
  }
  // Both endpoints are certified; rounding alone can cross them.
  out.bracket.lower = std::min(out.bracket.lower, out.bracket.upper);
  return out;
}

NormBracket pure_state_entanglement(const PureState& state, const SolverOptions& opts) {
  NormBracket b = projective_norm(state, opts).bracket;
  b.lower *= b.lower;
  b.upper *= b.upper;
  b.lower_certificate.reset();
  b.upper_certificate = "square of the projective bracket";
  return b;
}

Classification classify(const DensityOperator& rho, const SolverOptions& opts, double tol) {
  opts.validate();
  Classification out;
  const auto top = max_entangled_value(rho.shape());
  auto decide_by_witness = [&]() {
    if (!out.witness) return false;
    out.lower = std::max(out.lower, out.witness->value);
    if (top && out.witness->value >= *top - tol) {
      out.verdict = StateVerdict::maximally_entangled;
      return true;
    }
    if (out.witness->value > 1.0 + tol) {
      out.verdict = StateVerdict::entangled;
      return true;
    }
    return false;
  };

  out.witness = rank_one_witness(rho, opts);
  if (decide_by_witness()) return out;

  SeparableDecomposition sep = find_separable_decomposition(rho, opts);
  if (sep.residual <= tol) {
    out.verdict = StateVerdict::separable;
    out.separable = std::move(sep);
    return out;
  }
  if (auto search = operator_search(rho, opts)) {
    keep_better(out.witness, std::move(search->witness));
    if (decide_by_witness()) return out;
  }
  out.separable = std::move(sep);
  out.verdict = StateVerdict::undecided;
  return out;
}

LipschitzReport lipschitz_check(const DensityOperator& rho, const NormBracket& e_rho, const DensityOperator& sigma,
                                const NormBracket& e_sigma, double slack) {
  const auto top = max_entangled_value(rho.shape());
  if (!top || !(rho.shape() == sigma.shape())) {
    throw UnsupportedShapeError("lipschitz_check: needs two states on one shape with r(V) in closed form");
  }
  LipschitzReport out;
  out.e_rho = e_rho;
  out.e_sigma = e_sigma;
  out.constant = *top;
  out.trace_distance = linalg::trace_norm_hermitian(rho.matrix() - sigma.matrix());
  const double bound = out.constant * out.trace_distance + slack;
  out.violated = e_rho.lower - e_sigma.upper > bound || e_sigma.lower - e_rho.upper > bound;
  out.midpoint_gap = std::abs(e_rho.midpoint() - e_sigma.midpoint());
  return out;
}

LipschitzReport lipschitz_check(const DensityOperator& rho, const DensityOperator& sigma, const SolverOptions& opts,
                                double slack) {
  return lipschitz_check(rho, entanglement(rho, opts).bracket, sigma, entanglement(sigma, opts).bracket, slack);
}

MixtureReport mixture_component_check(const std::vector<double>& weights, const std::vector<PureState>& components,
                                      const SolverOptions& opts, double tol) {
  if (components.empty()) throw PreconditionError("mixture_component_check: no components");
  const auto top = max_entangled_value(components.front().shape());
  if (!top) {
    throw UnsupportedShapeError("mixture_component_check: r(V) has no closed form for " +
                                components.front().shape().to_string());
  }
  MixtureReport out;
  out.target = *top;
  const DensityOperator rho = DensityOperator::mixture(weights, components);
  out.bracket = entanglement(rho, opts).bracket;
  bool all_maximal = true;
  for (const auto& c : components) {
    out.components.push_back(is_maximal(c, opts, tol).verdict);
    all_maximal = all_maximal && out.components.back() == MaximalityVerdict::maximal;
  }
  out.reaches_maximal = out.bracket.lower >= out.target - tol;
  out.excluded = out.bracket.upper < out.target - tol;
  out.consistent = !out.reaches_maximal || all_maximal;
  if (out.reaches_maximal) {
    out.verdict = "maximally entangled certified";
  } else if (out.excluded) {
    out.verdict = "not maximally entangled certified";
  } else {
    out.verdict = "undecided";
  }
  return out;
}

}  // namespace entgeom
