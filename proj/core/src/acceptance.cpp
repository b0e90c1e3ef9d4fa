#include "entgeom/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "entgeom/divergence.hpp"
#include "entgeom/entanglement.hpp"
#include "entgeom/errors.hpp"
#include "entgeom/inner_radius.hpp"
#include "entgeom/linalg.hpp"
#include "entgeom/maximal.hpp"

namespace entgeom {

namespace {

constexpr std::uint64_t kAcceptanceSeed = 20240601;

struct Check {
  bool pass = true;
  std::ostringstream detail;

  Check() { detail << std::setprecision(10); }
  void require(bool ok) { pass = pass && ok; }
};

double max_dev(const NormBracket& b, double target) {
  return std::max(std::abs(b.lower - target), std::abs(b.upper - target));
}

// Singular values from the eigenvalues of M M^H, independent of the SVD used
// by the library.
Eigen::VectorXd oracle_singular_values(const CMatrix& m) {
  const CMatrix g = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
}

// Smallest eigenvalue of the partial transpose on the second factor.
double ppt_min_eigenvalue(const CMatrix& rho, std::size_t da, std::size_t db) {
  const auto a = static_cast<Eigen::Index>(da);
  const auto b = static_cast<Eigen::Index>(db);
  CMatrix pt(a * b, a * b);
  for (Eigen::Index i = 0; i < a; ++i) {
    for (Eigen::Index j = 0; j < b; ++j) {
      for (Eigen::Index k = 0; k < a; ++k) {
        for (Eigen::Index l = 0; l < b; ++l) pt(i * b + j, k * b + l) = rho(i * b + l, k * b + j);
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMatrix werner(double p) {
  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  return p * bell * bell.adjoint() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0;
}

PureState local_unitary_image(const PureState& xi, std::uint64_t seed) {
  CVector v = xi.amplitudes();
  for (std::size_t k = 0; k < xi.shape().rank(); ++k) {
    v = apply_local(xi.shape(), v, k, random_unitary(xi.shape().dim(k), derive_seed(seed, k)));
  }
  return PureState::normalized(xi.shape(), std::move(v));
}

void bipartite_oracle(Check& c, const SolverOptions& opts) {
  double worst = 0.0;
  int failures = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    const std::uint64_t seed = derive_seed(opts.seed, 1000 + i);
    const std::size_t m = 2 + seed % 7;
    const std::size_t n = m + (seed / 7) % (9 - m);
    const PureState xi = random_state(SpaceShape({m, n}), seed);
    const Eigen::VectorXd s = oracle_singular_values(matricize(xi, 1));
    const NormBracket inj = injective_norm(xi, opts);
    const NormBracket proj = projective_norm(xi, opts).bracket;
    const double dev = std::max({max_dev(inj, s.maxCoeff()), max_dev(proj, s.sum()), inj.width(), proj.width()});
    worst = std::max(worst, dev);
    if (dev > 1e-8) ++failures;
  }
  c.require(failures == 0);
  c.detail << "100 states, worst deviation " << worst << ", failures " << failures;
}

void canonical_maximal(Check& c, const SolverOptions& opts) {
  for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2}, {2, 4}, {2, 2, 4}, {2, 3, 6}}) {
    const SpaceShape shape(dims);
    const PureState xi = make_maximal(shape, opts.seed);
    const double r = *closed_form_inner_radius(shape);
    const double inj = max_dev(injective_norm(xi, opts), r);
    const double proj = max_dev(projective_norm(xi, opts).bracket, 1.0 / r);
    const double dist = max_dev(distance_to_V(xi, opts), std::sqrt(2.0 * (1.0 - r)));
    const double pur = purification_check(xi).deviation;
    c.require(inj <= 1e-8 && proj <= 1e-6 && dist <= 1e-6 && pur <= 1e-10);
    c.detail << shape.to_string() << ": inj " << inj << " proj " << proj << " dist " << dist << " pur " << pur
             << "; ";
  }
}

void simultaneity(Check& c, const SolverOptions& opts) {
  const SpaceShape shape({2, 2, 4});
  const PureState base = make_maximal(shape, opts.seed);
  int all_three = 0;
  int none = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const PureState xi = local_unitary_image(base, derive_seed(opts.seed, 3000 + i));
    const auto report = is_maximal(xi, opts, 1e-6);
    const auto& e = *report.evidence;
    if (e.injective_extremal(1e-6) && e.projective_extremal(1e-6) && e.distance_extremal(1e-6)) ++all_three;
  }
  for (std::uint64_t i = 0; i < 10; ++i) {
    const PureState xi = random_state(shape, derive_seed(opts.seed, 3100 + i));
    const auto report = is_maximal(xi, opts, 1e-6);
    const auto& e = *report.evidence;
    if (e.injective_excluded(1e-6) && e.projective_excluded(1e-6) && e.distance_excluded(1e-6)) ++none;
  }
  c.require(all_three == 10 && none == 10);
  c.detail << "maximal images meeting all three: " << all_three << "/10; random vectors failing all three: " << none
           << "/10";
}

void inner_radius_check(Check& c, const SolverOptions& opts) {
  const InnerRadiusResult closed = inner_radius(SpaceShape({2, 3, 6}), opts);
  const double exact = 1.0 / std::sqrt(6.0);
  c.require(closed.mode == RadiusMode::closed_form && closed.bracket.lower == exact && closed.bracket.upper == exact);
  const InnerRadiusResult search = inner_radius(SpaceShape({2, 2, 2}), opts, true);
  c.require(search.mode == RadiusMode::search && search.strict_lower && search.bracket.lower >= 0.5 &&
            search.bracket.upper <= 0.7072 && search.bracket.upper <= 0.667 + 1e-3);
  c.detail << "(2,3,6) " << closed.bracket.lower << " (" << to_string(closed.mode) << "); (2,2,2) ["
           << search.bracket.lower << ", " << search.bracket.upper << "] strict " << search.strict_lower << " from "
           << search.minimizer_origin;
}

void faithfulness(Check& c, const SolverOptions& opts) {
  double worst_separable = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const SpaceShape shape = i % 2 == 0 ? SpaceShape({2, 2}) : SpaceShape({2, 3});
    const std::size_t terms = 1 + i % 6;
    std::vector<double> w;
    std::vector<PureState> parts;
    for (std::size_t k = 0; k < terms; ++k) {
      w.push_back(1.0 + static_cast<double>(k));
      parts.push_back(expand_product(random_product(shape, derive_seed(opts.seed, 5000 + 16 * i + k)), shape));
    }
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    const auto e = entanglement(DensityOperator::mixture(w, parts), opts);
    worst_separable = std::max(worst_separable, e.bracket.upper);
  }
  c.require(worst_separable <= 1.0 + 1e-6);

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const NormBracket b = entanglement(DensityOperator(SpaceShape({2, 2}), bell * bell.adjoint()), opts).bracket;
  c.require(b.lower >= 2.0 - 1e-6 && b.upper <= 2.0 + 1e-6);

  // Independent boundary: the partial transpose turns negative at p = 1/3.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ppt_min_eigenvalue(werner(mid), 2, 2) < -1e-15 ? hi : lo) = mid;
  }
  const double ppt = 0.5 * (lo + hi);

  lo = 0.0;
  hi = 1.0;
  bool decided = true;
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    const auto verdict = classify(DensityOperator(SpaceShape({2, 2}), werner(mid)), opts).verdict;
    if (verdict == StateVerdict::undecided) {
      decided = false;
      break;
    }
    (verdict == StateVerdict::separable ? lo : hi) = mid;
  }
  const double boundary = 0.5 * (lo + hi);
  c.require(decided && std::abs(boundary - ppt) <= 0.05);
  c.detail << "separable max upper " << worst_separable << "; Bell [" << b.lower << ", " << b.upper
           << "]; Werner boundary " << boundary << " vs partial-transpose " << ppt;
}

void bounds_and_lipschitz(Check& c, const SolverOptions& opts) {
  const SpaceShape shape({2, 2});
  std::vector<DensityOperator> states;
  std::vector<NormBracket> brackets;
  double lowest = 3.0;
  double highest = 0.0;
  double widest = 0.0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    states.push_back(random_density(shape, derive_seed(opts.seed, 6000 + i)));
    brackets.push_back(entanglement(states.back(), opts).bracket);
    lowest = std::min(lowest, brackets.back().lower);
    highest = std::max(highest, brackets.back().upper);
    widest = std::max(widest, brackets.back().width());
  }
  c.require(lowest >= 1.0 - 1e-8 && highest <= 2.0 + 1e-8);
  int violations = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const LipschitzReport r = lipschitz_check(states[i], brackets[i], states[j], brackets[j], 1e-6);
      if (r.violated) ++violations;
      const double gap = std::max(brackets[i].upper - brackets[j].lower, brackets[j].upper - brackets[i].lower);
      tightest = std::min(tightest, r.constant * r.trace_distance - gap);
    }
  }
  c.require(violations == 0);
  c.detail << "E in [" << lowest << ", " << highest << "], widest bracket " << widest << ", violations "
           << violations << " of 19900 pairs, smallest slack " << tightest;
}

void transitivity(Check& c, const SolverOptions& opts) {
  const SpaceShape shape({2, 2, 4});
  double worst_residual = 0.0;
  double worst_unitarity = 0.0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    const PureState a = make_maximal(shape, derive_seed(opts.seed, 7000 + 2 * i));
    const PureState b = make_maximal(shape, derive_seed(opts.seed, 7001 + 2 * i));
    const CMatrix u = connect_maximal(a, b);
    const CVector moved = apply_local(shape, a.amplitudes(), shape.rank() - 1, u);
    worst_residual = std::max(worst_residual, (moved - b.amplitudes()).norm());
    worst_unitarity = std::max(worst_unitarity, linalg::max_abs_entry(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())));
  }
  c.require(worst_residual <= 1e-6 && worst_unitarity <= 1e-10);
  c.detail << "worst residual " << worst_residual << ", worst |U^H U - I| " << worst_unitarity;
}

void refinement(Check& c, const SolverOptions& opts) {
  const SpaceShape shape({2, 2, 4});
  int agree_maximal = 0;
  int agree_other = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto r = refinement_agreement(make_maximal(shape, derive_seed(opts.seed, 8000 + i)), opts);
    if (r.agree() && r.fine.verdict == MaximalityVerdict::maximal) ++agree_maximal;
  }
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto r = refinement_agreement(random_state(shape, derive_seed(opts.seed, 8100 + i)), opts);
    if (r.agree() && r.fine.verdict == MaximalityVerdict::not_maximal) ++agree_other;
  }
  c.require(agree_maximal == 20 && agree_other == 20);
  c.detail << "maximal agreeing: " << agree_maximal << "/20; non-maximal agreeing: " << agree_other << "/20";
}

void divergence(Check& c, const SolverOptions& opts) {
  double expected = 0.0;
  double worst = 0.0;
  double worst_block = 0.0;
  double previous = 0.0;
  bool growing = true;
  for (int k = 1; k <= 5; ++k) {
    expected += std::pow(2.0, 0.5 * k);
    const DivergentState d = build_divergent(k, 0.5, 4, opts);
    worst = std::max(worst, std::abs(d.nuclear_norm - expected));
    worst_block = std::max(worst_block, max_dev(d.rows.back().block_injective, 1.0));
    growing = growing && (k == 1 || d.normalized_nuclear_norm() > previous + 0.5);
    previous = d.normalized_nuclear_norm();
  }
  c.require(worst <= 1e-8 && worst_block <= 1e-8 && growing);
  c.detail << "worst nuclear-norm deviation " << worst << ", block injective deviation " << worst_block
           << ", K=5 normalized projective norm " << previous;
}

void vball(Check& c, const SolverOptions& opts) {
  for (const auto& dims : std::vector<std::vector<std::size_t>>{{2, 2}, {2, 2, 4}}) {
    const VBallReport r = vball_sup_check(SpaceShape(dims), opts);
    c.require(r.achieved && r.best_ratio >= r.target - 1e-6);
    c.detail << SpaceShape(dims).to_string() << ": ratio " << r.best_ratio << " target " << r.target << "; ";
  }
}

struct Entry {
  const char* name;
  void (*run)(Check&, const SolverOptions&);
};

constexpr Entry kEntries[kAcceptanceCriteria] = {
    {"bipartite oracle equivalence", bipartite_oracle},
    {"canonical maximal vectors", canonical_maximal},
    {"simultaneity of the three extremal conditions", simultaneity},
    {"inner radius", inner_radius_check},
    {"entanglement faithfulness", faithfulness},
    {"bounds and Lipschitz continuity of E", bounds_and_lipschitz},
    {"unitary transitivity", transitivity},
    {"refinement stability", refinement},
    {"divergence demo", divergence},
    {"V-ball supremum", vball},
};

}  // namespace

SolverOptions acceptance_options() {
  SolverOptions opts;
  opts.restarts = 64;
  opts.seed = kAcceptanceSeed;
  return opts;
}

CriterionOutcome run_criterion(int id, const SolverOptions& opts) {
  if (id < 1 || id > kAcceptanceCriteria) throw PreconditionError("no acceptance criterion " + std::to_string(id));
  const Entry& entry = kEntries[id - 1];
  CriterionOutcome out;
  out.id = id;
  out.name = entry.name;
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    entry.run(c, opts);
    out.pass = c.pass;
    out.detail = c.detail.str();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = c.detail.str() + "exception: " + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<CriterionOutcome> run_acceptance(const SolverOptions& opts) {
  std::vector<CriterionOutcome> out;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) out.push_back(run_criterion(id, opts));
  return out;
}

std::string format_outcome(const CriterionOutcome& outcome) {
  std::ostringstream s;
  s << (outcome.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << outcome.id << "  " << outcome.name << "  ("
    << outcome.detail << ")";
  return s.str();
}

}  // namespace entgeom
