#include "entgeom/projective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "entgeom/linalg.hpp"
#include "factor_polish.hpp"

namespace entgeom {

namespace {

constexpr double kHullTolerance = 1e-9;
constexpr std::size_t kPolishUnknowns = 600;

std::vector<std::size_t> iota_slots(std::size_t from, std::size_t to) {
  std::vector<std::size_t> s(to - from);
  std::iota(s.begin(), s.end(), from);
  return s;
}

ProductVector concat(const ProductVector& a, const ProductVector& b) {
  std::vector<CVector> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return ProductVector(std::move(f));
}

// Columns are the expanded dictionary atoms.
CMatrix dictionary_matrix(const std::vector<ProductVector>& atoms) {
  if (atoms.empty()) return CMatrix();
  const auto n = atoms.front().expand().data().size();
  CMatrix d(n, static_cast<Eigen::Index>(atoms.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k) d.col(static_cast<Eigen::Index>(k)) = atoms[k].expand().data();
  return d;
}

struct L1Solution {
  CVector coefficients;
  CVector dual;
};

// Iteratively reweighted least squares for min sum |c_k| s.t. D c = t.
// Each step solves the weighted minimum-norm problem
//   c = W D^H (D W D^H)^{-1} t,  W = diag(sqrt(|c|^2 + eps^2)),
// whose multiplier (D W D^H)^{-1} t satisfies |(D^H y)_k| <= 1 up to the
// smoothing, i.e. it is an approximate dual certificate.
L1Solution irls_l1(const CMatrix& d, const CVector& t, int iterations) {
  const double scale = t.norm();
  const double ridge = 1e-15 * std::max(1.0, d.squaredNorm());
  CMatrix g = d * d.adjoint();
  g.diagonal().array() += ridge;
  CVector lambda = g.ldlt().solve(t);
  CVector c = d.adjoint() * lambda;
  double eps = 0.1 * (c.size() ? c.cwiseAbs().maxCoeff() : 1.0);
  const double eps_floor = 1e-13 * scale;
  Eigen::VectorXd w(c.size());
  for (int it = 0; it < iterations; ++it) {
    for (Eigen::Index k = 0; k < c.size(); ++k) w(k) = std::sqrt(std::norm(c(k)) + eps * eps);
    g.noalias() = d * w.asDiagonal() * d.adjoint();
    g.diagonal().array() += ridge;
    lambda = g.ldlt().solve(t);
    const CVector next = w.asDiagonal() * (d.adjoint() * lambda);
    const double change = (next - c).norm();
    c = next;
    if (eps <= eps_floor && change <= 1e-15 * scale) break;
    eps = std::max(eps * 0.6, eps_floor);
  }
  return {std::move(c), std::move(lambda)};
}

ProductDecomposition decomposition_from(const std::vector<ProductVector>& atoms, const CVector& c, double drop) {
  ProductDecomposition out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Complex ck = c(static_cast<Eigen::Index>(k));
    if (std::abs(ck) > drop) out.terms.push_back({ck, atoms[k]});
  }
  return out;
}

// Least-squares refit of the coefficients of a fixed atom set.
ProductDecomposition refit(const ProductDecomposition& dec, const Tensor& t) {
  std::vector<ProductVector> atoms;
  for (const auto& term : dec.terms) atoms.push_back(term.product);
  const CMatrix d = dictionary_matrix(atoms);
  const CVector c = d.completeOrthogonalDecomposition().solve(t.data());
  return decomposition_from(atoms, c, 0.0);
}

struct Scored {
  ProductDecomposition decomposition;
  double residual = 0.0;
  double bound = std::numeric_limits<double>::infinity();
};

Scored score(ProductDecomposition dec, const Tensor& t, double cap_factor) {
  Scored s;
  s.residual = (t.data() - dec.reconstruct(t.dims()).data()).norm();
  s.bound = dec.cost() + cap_factor * s.residual;
  s.decomposition = std::move(dec);
  return s;
}

// Keeps the `budget` heaviest terms and re-solves the l1 problem on them.
Scored enforce_term_budget(Scored s, const Tensor& t, std::size_t budget, double cap_factor, int irls_iterations) {
  if (s.decomposition.size() <= budget) return s;
  auto terms = s.decomposition.terms;
  std::stable_sort(terms.begin(), terms.end(), [](const ProductTerm& a, const ProductTerm& b) {
    return std::abs(a.coefficient) > std::abs(b.coefficient);
  });
  terms.erase(terms.begin() + static_cast<std::ptrdiff_t>(budget), terms.end());
  std::vector<ProductVector> atoms;
  for (const auto& term : terms) atoms.push_back(term.product);
  Scored refit_ls = score(refit(ProductDecomposition{std::move(terms)}, t), t, cap_factor);
  const L1Solution sol = irls_l1(dictionary_matrix(atoms), t.data(), irls_iterations);
  Scored refit_l1 = score(decomposition_from(atoms, sol.coefficients, 0.0), t, cap_factor);
  return refit_l1.bound < refit_ls.bound ? refit_l1 : refit_ls;
}

bool already_present(const std::vector<ProductVector>& atoms, const ProductVector& p) {
  const CVector e = p.expand().data();
  for (const auto& a : atoms) {
    if (std::abs(a.expand().data().dot(e)) > 1.0 - 1e-10) return true;
  }
  return false;
}

std::size_t term_budget(const std::vector<std::size_t>& dims) {
  const std::size_t total = product_of(dims);
  const std::size_t largest = *std::max_element(dims.begin(), dims.end());
  return 4 * (total / largest);
}

double dual_value(const Tensor& eta, const Tensor& t, double eta_upper) {
  return std::abs(eta.data().dot(t.data())) / eta_upper;
}

ProjectiveResult exact_bipartite(const Tensor& t) {
  const std::size_t rows[] = {0};
  const auto dec = linalg::svd(t.matricize(rows));
  ProjectiveResult out;
  for (Eigen::Index j = 0; j < dec.s.size(); ++j) {
    if (dec.s(j) <= 0.0) continue;
    out.decomposition.terms.push_back({dec.s(j), ProductVector({dec.u.col(j), dec.v.col(j).conjugate()})});
  }
  const double nuclear = dec.s.sum();
  out.residual = (t.data() - out.decomposition.reconstruct(t.dims()).data()).norm();
  out.bracket.lower = nuclear;
  out.bracket.upper = nuclear;
  out.bracket.upper_certificate = "sum of singular values (exact for two slots)";
  out.dual = Tensor::from_matrix(t.dims(), rows, dec.u * dec.v.adjoint());
  out.dual_injective_upper = 1.0;
  return out;
}

ProjectiveResult multi_slot(const Tensor& t, const SolverOptions& opts) {
  const double cap_factor = projective_cap_factor(t.dims());
  const std::size_t budget = term_budget(t.dims());
  const std::size_t n = t.size();

  // Upper bound: candidate decompositions, then column generation.
  std::vector<Scored> candidates;
  for (std::size_t s = 0; s < t.rank(); ++s) candidates.push_back(score(slice_decomposition(t, s), t, cap_factor));
  for (std::size_t k = 1; k < t.rank(); ++k) {
    if (auto dec = schmidt_tree_decomposition(t, k)) candidates.push_back(score(std::move(*dec), t, cap_factor));
  }
  auto best_it = std::min_element(candidates.begin(), candidates.end(),
                                  [](const Scored& a, const Scored& b) { return a.bound < b.bound; });
  Scored best = *best_it;
  std::string best_label = "initial decomposition";

  std::vector<ProductVector> atoms;
  for (const auto& c : candidates) {
    for (const auto& term : c.decomposition.terms) atoms.push_back(term.product);
  }
  std::vector<Tensor> duals;
  const int rounds = n <= 64 ? 40 : (n <= 256 ? 6 : 2);
  const int irls_iterations = n <= 64 ? 120 : 50;
  SolverOptions pricing = opts;
  pricing.restarts = std::min(opts.restarts, 8);
  pricing.max_iterations = std::min(opts.max_iterations, 200);

  int rounds_run = 0;
  for (int round = 0; round < rounds; ++round) {
    ++rounds_run;
    const CMatrix d = dictionary_matrix(atoms);
    const L1Solution sol = irls_l1(d, t.data(), irls_iterations);
    Scored s = score(decomposition_from(atoms, sol.coefficients, 1e-14 * t.norm()), t, cap_factor);
    s = enforce_term_budget(std::move(s), t, budget, cap_factor, irls_iterations);
    if (s.bound < best.bound) {
      best = std::move(s);
      best_label = "l1 column generation";
    }
    if (sol.dual.norm() == 0.0) break;
    const Tensor y(t.dims(), sol.dual);
    duals.push_back(y);
    // Pricing: atoms violating |<p, y>| <= 1 join the dictionary. Besides the
    // global search, each heavy atom is pushed uphill on |<p, y>|.
    std::vector<ProductVector> fresh;
    const AscentResult worst = best_product_overlap(y, pricing);
    if (worst.value > 1.0 + 1e-9) fresh.push_back(ProductVector::normalized(worst.factors));
    // Heaviest atoms first; only these are pushed uphill and kept.
    std::vector<Eigen::Index> support;
    for (Eigen::Index k = 0; k < sol.coefficients.size(); ++k) {
      if (std::abs(sol.coefficients(k)) > 1e-6 * t.norm()) support.push_back(k);
    }
    std::stable_sort(support.begin(), support.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(sol.coefficients(a)) > std::abs(sol.coefficients(b));
    });
    if (support.size() > budget) support.resize(budget);
    for (Eigen::Index k : support) {
      const AscentResult local =
          alternating_ascent(y, atoms[static_cast<std::size_t>(k)].factors(), 50, 1e-12);
      if (local.value > 1.0 + 1e-7) fresh.push_back(ProductVector::normalized(local.factors));
    }
    if (fresh.empty()) break;
    // Drop atoms the solution barely uses so the dictionary stays small.
    if (atoms.size() + fresh.size() > 4 * budget) {
      std::vector<ProductVector> kept;
      for (Eigen::Index k : support) kept.push_back(atoms[static_cast<std::size_t>(k)]);
      atoms = std::move(kept);
    }
    std::size_t added = 0;
    for (auto& p : fresh) {
      if (!already_present(atoms, p)) {
        atoms.push_back(std::move(p));
        ++added;
      }
    }
    if (added == 0) break;
  }

  // Smooth refinement of the factors of the best decomposition found.
  const std::size_t unknowns = 2 * best.decomposition.size() * std::accumulate(t.dims().begin(), t.dims().end(), std::size_t{0});
  if (!best.decomposition.terms.empty() && unknowns <= kPolishUnknowns) {
    detail::FactorSet start;
    for (const auto& term : best.decomposition.terms) {
      start.push_back(detail::balanced_factors(term.coefficient, term.product.factors()));
    }
    ProductDecomposition polished;
    for (auto& factors : detail::polish_decomposition(t, std::move(start), 100)) {
      double weight = 1.0;
      for (const auto& f : factors) weight *= f.norm();
      if (weight == 0.0) continue;
      polished.terms.push_back({weight, ProductVector::normalized(std::move(factors))});
    }
    Scored s = score(std::move(polished), t, cap_factor);
    if (s.bound < best.bound) {
      best = std::move(s);
      best_label = "polished product decomposition";
    }
  }

  // Lower bound: dual candidates normalized by a certified injective upper bound.
  // At an optimal decomposition every atom p_j maximizes |<p, y>| over V
  // with value 1, so contracting y against all factors of p_j but one gives
  // phase(c_j) times the remaining factor. Those equations are linear in y.
  bool fitted = false;
  if (!best.decomposition.terms.empty()) {
    const double heavy = 1e-6 * best.decomposition.cost();
    std::vector<CVector> rows;
    std::vector<Complex> rhs;
    for (const auto& term : best.decomposition.terms) {
      if (std::abs(term.coefficient) <= heavy) continue;
      const Complex phase = term.coefficient / std::abs(term.coefficient);
      const auto& f = term.product.factors();
      for (std::size_t k = 0; k < f.size(); ++k) {
        for (Eigen::Index a = 0; a < f[k].size(); ++a) {
          std::vector<CVector> q = f;
          q[k] = CVector::Zero(f[k].size());
          q[k](a) = 1.0;
          rows.push_back(ProductVector(std::move(q)).expand().data());
          rhs.push_back(phase * f[k](a));
        }
      }
    }
    CMatrix system(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    CVector values(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      system.row(static_cast<Eigen::Index>(r)) = rows[r].adjoint();
      values(static_cast<Eigen::Index>(r)) = rhs[r];
    }
    const CVector y = system.completeOrthogonalDecomposition().solve(values);
    if (y.allFinite() && y.norm() > 0.0) {
      duals.push_back(Tensor(t.dims(), y));
      fitted = true;
    }
  }
  const std::size_t fitted_index = fitted ? duals.size() - 1 : duals.size() + 1000;
  duals.push_back(t);
  for (const auto& s : linalg::bipartitions(t.rank())) {
    const auto dec = linalg::svd(t.matricize(s));
    duals.push_back(Tensor::from_matrix(t.dims(), s, dec.u * dec.v.adjoint()));
  }
  struct DualScore {
    std::size_t index;
    double value;
    double upper;
  };
  std::vector<DualScore> scored;
  for (std::size_t i = 0; i < duals.size(); ++i) {
    if (duals[i].norm() == 0.0) continue;
    const double u = bipartition_upper_bound(duals[i]).value;
    scored.push_back({i, dual_value(duals[i], t, u), u});
  }
  std::stable_sort(scored.begin(), scored.end(), [](const DualScore& a, const DualScore& b) { return a.value > b.value; });
  // Only the strongest few get the expensive certified refinement.
  // xi itself is moved to the front so it is always refined.
  const std::size_t self_index = duals.size() - 1 - linalg::bipartitions(t.rank()).size();
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].index == self_index) {
      std::rotate(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(i), scored.begin() + static_cast<std::ptrdiff_t>(i + 1));
      break;
    }
  }
  for (std::size_t i = 0; i < scored.size(); ++i) {
    if (scored[i].index == fitted_index) {
      std::rotate(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(i), scored.begin() + static_cast<std::ptrdiff_t>(i + 1));
      break;
    }
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(4, scored.size()); ++i) {
    const Tensor& eta = duals[scored[i].index];
    const double lower_inj = best_product_overlap(eta, pricing).value;
    const double u = std::min(scored[i].upper, injective_upper_bound(eta, opts, lower_inj).value);
    scored[i].upper = u;
    scored[i].value = dual_value(eta, t, u);
  }
  const auto top = std::max_element(scored.begin(), scored.end(),
                                    [](const DualScore& a, const DualScore& b) { return a.value < b.value; });

  ProjectiveResult out;
  out.decomposition = std::move(best.decomposition);
  out.residual = best.residual;
  out.bracket.upper = best.bound;
  out.bracket.lower = std::min(top->value, out.bracket.upper);
  out.dual = duals[top->index];
  out.dual_injective_upper = top->upper;
  std::ostringstream os;
  os << best_label << " with " << out.decomposition.size() << " terms";
  out.bracket.upper_certificate = os.str();
  out.bracket.iterations = rounds_run;
  out.bracket.restarts_used = pricing.restarts;
  return out;
}

void require_nonzero(const Tensor& t) {
  const double n = t.norm();
  if (!std::isfinite(n) || n == 0.0) throw InvariantError("projective_norm: tensor must be nonzero and finite");
}

}  // namespace

double ProductDecomposition::cost() const {
  double c = 0.0;
  for (const auto& term : terms) c += std::abs(term.coefficient);
  return c;
}

Tensor ProductDecomposition::reconstruct(const std::vector<std::size_t>& dims) const {
  Tensor out = Tensor::zeros(dims);
  for (const auto& term : terms) out.data() += term.coefficient * term.product.expand().data();
  return out;
}

double projective_cap_factor(const std::vector<std::size_t>& dims) {
  const std::size_t largest = *std::max_element(dims.begin(), dims.end());
  return std::sqrt(static_cast<double>(product_of(dims) / largest));
}

ProductDecomposition slice_decomposition(const Tensor& t, std::size_t free_slot) {
  if (free_slot >= t.rank()) throw BoundsError("slice_decomposition: slot out of range");
  const std::size_t rows[] = {free_slot};
  const CMatrix m = t.matricize(rows);  // free slot x (other slots, ascending)
  std::vector<std::size_t> other_dims;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (k != free_slot) other_dims.push_back(t.dims()[k]);
  }
  ProductDecomposition out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const CVector v = m.col(c);
    const double len = v.norm();
    if (len == 0.0) continue;
    // Column c enumerates the other slots in row-major order.
    std::vector<CVector> factors(t.rank());
    std::size_t rest = static_cast<std::size_t>(c);
    for (std::size_t j = other_dims.size(); j-- > 0;) {
      const std::size_t idx = rest % other_dims[j];
      rest /= other_dims[j];
      const std::size_t slot = j < free_slot ? j : j + 1;
      CVector e = CVector::Zero(static_cast<Eigen::Index>(other_dims[j]));
      e(static_cast<Eigen::Index>(idx)) = 1.0;
      factors[slot] = std::move(e);
    }
    factors[free_slot] = v / len;
    out.terms.push_back({len, ProductVector(std::move(factors))});
  }
  return out;
}

std::optional<ProductDecomposition> schmidt_tree_decomposition(const Tensor& t, std::size_t split,
                                                               std::size_t max_terms) {
  ProductDecomposition out;
  const double len = t.norm();
  if (len == 0.0) return out;
  if (t.rank() == 1) {
    out.terms.push_back({len, ProductVector({t.data() / len})});
    return out;
  }
  if (split == 0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < t.rank(); ++k) {
      const double v = linalg::nuclear_norm(t.matricize(iota_slots(0, k)));
      if (v < best) {
        best = v;
        split = k;
      }
    }
  }
  if (split >= t.rank()) throw BoundsError("schmidt_tree_decomposition: split out of range");
  const auto rows = iota_slots(0, split);
  const auto dec = linalg::svd(t.matricize(rows));
  const std::vector<std::size_t> left_dims(t.dims().begin(), t.dims().begin() + static_cast<std::ptrdiff_t>(split));
  const std::vector<std::size_t> right_dims(t.dims().begin() + static_cast<std::ptrdiff_t>(split), t.dims().end());
  const double drop = 1e-14 * dec.s(0);
  for (Eigen::Index j = 0; j < dec.s.size(); ++j) {
    if (dec.s(j) <= drop) continue;
    auto left = schmidt_tree_decomposition(Tensor(left_dims, dec.u.col(j)), 0, max_terms);
    auto right = schmidt_tree_decomposition(Tensor(right_dims, dec.v.col(j).conjugate()), 0, max_terms);
    if (!left || !right) return std::nullopt;
    if (out.size() + left->size() * right->size() > max_terms) return std::nullopt;
    for (const auto& a : left->terms) {
      for (const auto& b : right->terms) {
        out.terms.push_back({dec.s(j) * a.coefficient * b.coefficient, concat(a.product, b.product)});
      }
    }
  }
  return out;
}

ProjectiveResult projective_norm(const Tensor& t, const SolverOptions& opts) {
  opts.validate();
  require_nonzero(t);
  if (t.rank() == 1) {
    ProjectiveResult out;
    out.bracket.lower = out.bracket.upper = t.norm();
    out.bracket.upper_certificate = "vector norm";
    out.decomposition.terms.push_back({t.norm(), ProductVector({t.data() / t.norm()})});
    out.dual = t;
    out.dual_injective_upper = t.norm();
    return out;
  }
  if (t.rank() == 2) return exact_bipartite(t);
  return multi_slot(t, opts);
}

ProjectiveResult projective_norm(const PureState& state, const SolverOptions& opts) {
  return projective_norm(state.as_tensor(), opts);
}

ProjectiveResult projective_norm_generic(const Tensor& t, const SolverOptions& opts) {
  opts.validate();
  require_nonzero(t);
  if (t.rank() == 1) return projective_norm(t, opts);
  return multi_slot(t, opts);
}

DecomposabilityResult is_decomposable(const PureState& state, const SolverOptions& opts, double tol) {
  DecomposabilityResult out;
  out.injective = injective_norm(state, opts);
  out.decomposable = out.injective.lower >= 1.0 - tol;
  if (out.decomposable) out.certificate = out.injective.lower_certificate;
  return out;
}

HullResult hull_membership(const SpaceShape& shape, const CVector& vector, const SolverOptions& opts) {
  if (static_cast<std::size_t>(vector.size()) != shape.total_dim()) {
    throw ShapeError("hull_membership: vector length does not match " + shape.to_string());
  }
  HullResult out;
  if (vector.norm() == 0.0) {
    out.verdict = HullVerdict::inside;
    out.bracket.upper_certificate = "zero vector";
    return out;
  }
  out.bracket = projective_norm(Tensor(shape.dims(), vector), opts).bracket;
  if (out.bracket.upper <= 1.0 + kHullTolerance) {
    out.verdict = HullVerdict::inside;
  } else if (out.bracket.lower > 1.0 + kHullTolerance) {
    out.verdict = HullVerdict::outside;
  } else {
    out.verdict = HullVerdict::undecided;
  }
  return out;
}

const char* to_string(HullVerdict v) noexcept {
  switch (v) {
    case HullVerdict::inside: return "inside";
    case HullVerdict::outside: return "outside";
    case HullVerdict::undecided: return "undecided";
  }
  return "undecided";
}

}  // namespace entgeom
