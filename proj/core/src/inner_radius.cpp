#include "entgeom/inner_radius.hpp"

#include <algorithm>
#include <cmath>

#include "entgeom/errors.hpp"
#include "entgeom/linalg.hpp"
#include "entgeom/maximal.hpp"

namespace entgeom {

namespace {

constexpr double kInitialTemperature = 1e3;
constexpr int kAnnealPeriod = 50;
constexpr int kRefreshPeriod = 10;
constexpr std::size_t kActiveSetLimit = 64;

CVector basis_product(const SpaceShape& shape, const std::vector<std::size_t>& index) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  v(static_cast<Eigen::Index>(flatten_index(shape, index))) = 1.0;
  return v;
}

// GHZ-like: sum_i e_i (x) ... (x) e_i over i < min dim.
CVector ghz_like(const SpaceShape& shape) {
  const auto dims = shape.dims();
  const std::size_t k = *std::min_element(dims.begin(), dims.end());
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  for (std::size_t i = 0; i < k; ++i) v += basis_product(shape, std::vector<std::size_t>(shape.rank(), i));
  return v.normalized();
}

// W-like: one excitation e_1 shared over all slots of dimension >= 2.
CVector w_like(const SpaceShape& shape) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    if (shape.dim(k) < 2) continue;
    std::vector<std::size_t> index(shape.rank(), 0);
    index[k] = 1;
    v += basis_product(shape, index);
  }
  if (v.norm() == 0.0) v(0) = 1.0;
  return v.normalized();
}

// Maximally entangled on slots 0 and 1, e_0 elsewhere.
CVector bell_like(const SpaceShape& shape) {
  const std::size_t k = std::min(shape.dim(0), shape.dim(1));
  CVector v = CVector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::size_t> index(shape.rank(), 0);
    index[0] = index[1] = i;
    v += basis_product(shape, index);
  }
  return v.normalized();
}

struct ActiveSet {
  std::vector<ProductVector> products;
  CMatrix expanded;  // columns are the expanded products

  void rebuild() {
    if (products.empty()) {
      expanded.resize(0, 0);
      return;
    }
    expanded.resize(products.front().expand().data().size(), static_cast<Eigen::Index>(products.size()));
    for (std::size_t k = 0; k < products.size(); ++k) expanded.col(static_cast<Eigen::Index>(k)) = products[k].expand().data();
  }
};

// (1/T) log sum exp(T |<p, xi>|^2) and its real gradient in xi.
double smoothed_max(const ActiveSet& set, const CVector& xi, double temperature, CVector* gradient) {
  const CVector overlaps = set.expanded.adjoint() * xi;
  const Eigen::VectorXd values = overlaps.cwiseAbs2();
  const double top = values.maxCoeff();
  const Eigen::VectorXd weights = (temperature * (values.array() - top)).exp().matrix();
  const double total = weights.sum();
  if (gradient) *gradient = 2.0 * set.expanded * (weights.cast<Complex>().cwiseProduct(overlaps)) / total;
  return top + std::log(total) / temperature;
}

void refresh(ActiveSet& set, const Tensor& xi, const SolverOptions& opts, std::uint64_t stream) {
  std::vector<std::pair<double, ProductVector>> found;
  auto add = [&](const AscentResult& r) { found.emplace_back(r.value, ProductVector::normalized(r.factors)); };
  for (const auto& p : set.products) add(alternating_ascent(xi, p.factors(), 30, 1e-12));
  for (std::uint64_t k = 0; k < 2; ++k) {
    add(alternating_ascent(xi, random_product(xi.dims(), derive_seed(opts.seed, stream * 16 + k)).factors(), 60, 1e-12));
  }
  for (const auto& p : set.products) found.emplace_back(std::abs(p.overlap(xi)), p);
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<ProductVector> kept;
  for (const auto& [value, p] : found) {
    if (kept.size() >= kActiveSetLimit) break;
    const CVector e = p.expand().data();
    bool duplicate = false;
    for (const auto& q : kept) {
      if (std::abs(q.expand().data().dot(e)) > 1.0 - 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(p);
  }
  set.products = std::move(kept);
  set.rebuild();
}

double certified_upper(const PureState& state, const SolverOptions& opts) { return injective_norm(state, opts).upper; }

}  // namespace

const char* to_string(RadiusMode m) noexcept {
  return m == RadiusMode::closed_form ? "closed-form" : "search";
}

PureState descend_injective(const PureState& start, const SolverOptions& opts, int iterations) {
  const SpaceShape& shape = start.shape();
  CVector xi = start.amplitudes();
  ActiveSet set;
  std::uint64_t stream = 0;
  refresh(set, Tensor(shape.dims(), xi), opts, stream++);
  double temperature = kInitialTemperature;
  double step = 0.1;
  for (int it = 0; it < iterations; ++it) {
    if (it > 0 && it % kAnnealPeriod == 0) temperature *= 2.0;
    if (it > 0 && it % kRefreshPeriod == 0) refresh(set, Tensor(shape.dims(), xi), opts, stream++);
    CVector g;
    const double f = smoothed_max(set, xi, temperature, &g);
    // Tangent component at xi on the real sphere.
    g -= Complex(xi.dot(g).real()) * xi;
    if (g.norm() < 1e-14) break;
    // Backtracking on the sphere.
    bool moved = false;
    for (int tries = 0; tries < 30; ++tries) {
      const CVector trial = (xi - step * g).normalized();
      if (smoothed_max(set, trial, temperature, nullptr) < f - 1e-4 * step * g.squaredNorm()) {
        xi = trial;
        step *= 1.5;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) step = 0.1;
  }
  return PureState(shape, xi.normalized());
}

InnerRadiusResult inner_radius(const SpaceShape& shape, const SolverOptions& opts, bool force_search) {
  opts.validate();
  InnerRadiusResult out;
  const SpaceShape sorted = shape.sorted();
  const double floor = 1.0 / std::sqrt(static_cast<double>(sorted.leading_dim()));
  if (!force_search) {
    if (const auto r = closed_form_inner_radius(shape)) {
      out.mode = RadiusMode::closed_form;
      out.bracket.lower = out.bracket.upper = *r;
      out.bracket.upper_certificate = "closed form 1/sqrt(n_1...n_{N-1})";
      // The minimizer is built on the sorted shape, where the largest factor is last.
      if (sorted.dims() == shape.dims()) {
        out.minimizer = make_maximal(shape, opts.seed);
        out.minimizer_origin = "maximal form";
      }
      return out;
    }
  }

  out.mode = RadiusMode::search;
  out.strict_lower = !sorted.admits_maximal_form();
  out.bracket.lower = floor;

  // Grouping cap: a coarser partition has a larger V, hence a larger inner radius.
  std::size_t widest = 1;
  for (const auto& s : linalg::bipartitions(shape.rank())) {
    std::size_t left = 1;
    for (std::size_t k : s) left *= shape.dim(k);
    widest = std::max(widest, std::min(left, shape.total_dim() / left));
  }
  out.bracket.upper = 1.0 / std::sqrt(static_cast<double>(widest));
  out.bracket.upper_certificate = "two-slot grouping cap";
  out.minimizer_origin = "grouping cap";

  auto consider = [&](const PureState& candidate, const std::string& label) {
    const double u = certified_upper(candidate, opts);
    if (u < out.bracket.upper) {
      out.bracket.upper = u;
      out.bracket.upper_certificate = "certified injective upper endpoint at " + label;
      out.minimizer = candidate;
      out.minimizer_origin = label;
    }
  };

  std::vector<std::pair<std::string, CVector>> starts;
  if (shape.rank() >= 2) {
    starts.emplace_back("GHZ", ghz_like(shape));
    starts.emplace_back("W", w_like(shape));
    starts.emplace_back("Bell x e0", bell_like(shape));
  }
  for (const auto& [label, v] : starts) {
    const PureState s(shape, v);
    consider(s, label);
    consider(descend_injective(s, opts), label + " descended");
  }
  for (int r = 0; r < opts.restarts; ++r) {
    const PureState s = random_state(shape, derive_seed(opts.seed, 100 + static_cast<std::uint64_t>(r)));
    consider(descend_injective(s, opts), "random start " + std::to_string(r) + " descended");
  }
  out.bracket.restarts_used = opts.restarts;
  // Never report upper < lower; the lower endpoint is a proven bound.
  out.bracket.upper = std::max(out.bracket.upper, out.bracket.lower);
  return out;
}

NormBracket sup_distance(const SpaceShape& shape, const SolverOptions& opts, bool force_search) {
  const InnerRadiusResult r = inner_radius(shape, opts, force_search);
  NormBracket out;
  out.lower = std::sqrt(std::max(0.0, 2.0 * (1.0 - r.bracket.upper)));
  out.upper = std::sqrt(std::max(0.0, 2.0 * (1.0 - r.bracket.lower)));
  out.upper_certificate = "sqrt(2 (1 - r)) at the inner radius lower endpoint";
  return out;
}

VBallReport vball_sup_check(const SpaceShape& shape, const SolverOptions& opts) {
  const auto r = closed_form_inner_radius(shape);
  if (!r) {
    throw UnsupportedShapeError("vball_sup_check: r(V) has no closed form for " + shape.to_string() +
                                " (needs the largest factor >= product of the others)");
  }
  VBallReport out;
  out.target = static_cast<double>(shape.sorted().leading_dim());

  std::vector<std::pair<std::string, PureState>> zetas;
  const SpaceShape sorted = shape.sorted();
  if (sorted.dims() == shape.dims()) {
    zetas.emplace_back("maximal vector", make_maximal(shape, opts.seed));
  } else {
    // Build on the sorted shape and move the slots back.
    const PureState m = make_maximal(sorted, opts.seed);
    std::vector<std::size_t> order(shape.rank());
    std::vector<bool> used(shape.rank(), false);
    for (std::size_t k = 0; k < shape.rank(); ++k) {
      for (std::size_t j = 0; j < sorted.rank(); ++j) {
        if (!used[j] && sorted.dim(j) == shape.dim(k)) {
          order[k] = j;
          used[j] = true;
          break;
        }
      }
    }
    zetas.emplace_back("maximal vector", permute_slots(m, order));
  }
  zetas.emplace_back("product vector", expand_product(random_product(shape, derive_seed(opts.seed, 1)), shape));
  zetas.emplace_back("random state", random_state(shape, derive_seed(opts.seed, 2)));

  for (const auto& [label, zeta] : zetas) {
    const CVector& z = zeta.amplitudes();
    const CMatrix x = z * z.adjoint();
    // ||X|| = 1 for a unit zeta; ||X||_V = ||zeta||_V^2 is bounded by either route.
    const double via_operator = operator_injective_norm(x, shape, opts).bracket.upper;
    const double via_vector = std::pow(injective_norm(zeta, opts).upper, 2);
    const double vnorm = std::min(via_operator, via_vector);
    const double op_norm = linalg::sigma_max(x);
    out.samples.push_back({label, op_norm / vnorm});
  }
  bool bounded = true;
  for (const auto& s : out.samples) {
    out.best_ratio = std::max(out.best_ratio, s.ratio);
    bounded = bounded && s.ratio <= out.target + 1e-6;
  }
  out.achieved = bounded && out.best_ratio >= out.target - 1e-6;
  return out;
}

}  // namespace entgeom
