#include <algorithm>
#include <cmath>
#include <limits>

#include "entgeom/entanglement.hpp"
#include "entgeom/linalg.hpp"
#include "factor_polish.hpp"

namespace entgeom {

namespace {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Lawson-Hanson active-set method for min |A w - b| subject to w >= 0.
RealVector nnls(const RealMatrix& a, const RealVector& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  RealVector w = RealVector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());

  auto solve_passive = [&](RealVector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    RealMatrix sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const RealVector s = sub.completeOrthogonalDecomposition().solve(b);
    z.setZero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = s(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iterations; ++outer) {
    const RealVector grad = a.transpose() * (b - a * w);
    Eigen::Index best = -1;
    double best_value = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_value) {
        best_value = grad(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    RealVector z;
    for (int inner = 0; inner < 4 * static_cast<int>(n) + 10; ++inner) {
      solve_passive(z);
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          feasible = false;
          const double denom = w(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, w(j) / denom);
        }
      }
      if (feasible) break;
      w += alpha * (z - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && w(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          w(j) = 0.0;
        }
      }
    }
    w = z.cwiseMax(0.0);
  }
  return w;
}

RealVector projector_coordinates(const ProductVector& p) {
  const CVector v = p.expand().data();
  return detail::hermitian_coordinates(v * v.adjoint());
}

bool contains(const std::vector<ProductVector>& pool, const ProductVector& p) {
  const CVector e = p.expand().data();
  for (const auto& q : pool) {
    if (std::abs(q.expand().data().dot(e)) > 1.0 - 1e-12) return true;
  }
  return false;
}

SeparableDecomposition finish(const DensityOperator& rho, std::vector<double> weights, std::vector<ProductVector> states) {
  SeparableDecomposition out;
  const auto n = static_cast<Eigen::Index>(rho.shape().total_dim());
  CMatrix sum = CMatrix::Zero(n, n);
  double total = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const CVector v = states[k].expand().data();
    sum.noalias() += weights[k] * v * v.adjoint();
    total += weights[k];
  }
  out.residual = linalg::trace_norm_hermitian(rho.matrix() - sum);
  out.raw_weight = total;
  if (total > 0.0) {
    for (double& w : weights) w /= total;
  }
  out.weights = std::move(weights);
  out.states = std::move(states);
  return out;
}

}  // namespace

CMatrix SeparableDecomposition::reconstruct(std::size_t total_dim) const {
  const auto n = static_cast<Eigen::Index>(total_dim);
  CMatrix sum = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const CVector v = states[k].expand().data();
    sum.noalias() += weights[k] * v * v.adjoint();
  }
  return sum;
}

SeparableDecomposition find_separable_decomposition(const DensityOperator& rho, const SolverOptions& opts,
                                                    const SeparableSearchOptions& search) {
  opts.validate();
  const SpaceShape& shape = rho.shape();
  const std::size_t d = shape.total_dim();
  const std::size_t cap = search.max_atoms ? search.max_atoms : 4 * d * d;
  const RealVector target = detail::hermitian_coordinates(rho.matrix());

  SolverOptions pricing = opts;
  pricing.restarts = std::min(opts.restarts, 8);
  pricing.max_iterations = std::min(opts.max_iterations, 200);

  std::vector<ProductVector> pool;
  auto add = [&](ProductVector p) {
    if (pool.size() < cap && !contains(pool, p)) pool.push_back(std::move(p));
  };
  // Product basis, nearest products of the eigenvectors, random products.
  for (std::size_t i = 0; i < d; ++i) {
    const auto index = unflatten_index(shape, i);
    std::vector<CVector> f;
    for (std::size_t k = 0; k < shape.rank(); ++k) {
      CVector e = CVector::Zero(static_cast<Eigen::Index>(shape.dim(k)));
      e(static_cast<Eigen::Index>(index[k])) = 1.0;
      f.push_back(std::move(e));
    }
    add(ProductVector(std::move(f)));
  }
  const auto eig = linalg::hermitian_eigen(rho.matrix());
  for (Eigen::Index j = eig.values.size(); j-- > 0;) {
    if (eig.values(j) <= 1e-12) break;
    add(ProductVector::normalized(best_product_overlap(Tensor(shape.dims(), eig.vectors.col(j)), pricing).factors));
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(4 * d, cap); ++i) add(random_product(shape, derive_seed(opts.seed, 500 + i)));

  RealVector weights;
  for (int round = 0; round < search.rounds; ++round) {
    RealMatrix a(target.size(), static_cast<Eigen::Index>(pool.size()));
    for (std::size_t k = 0; k < pool.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = projector_coordinates(pool[k]);
    weights = nnls(a, target, 3 * static_cast<int>(pool.size()) + 10);
    const RealVector residual = target - a * weights;
    if (residual.norm() < 1e-13 || pool.size() >= cap) break;
    // Rebuild the residual operator and move toward its most positive direction.
    CMatrix r = rho.matrix();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (weights(static_cast<Eigen::Index>(k)) == 0.0) continue;
      const CVector v = pool[k].expand().data();
      r.noalias() -= weights(static_cast<Eigen::Index>(k)) * v * v.adjoint();
    }
    const auto re = linalg::hermitian_eigen(r);
    const Eigen::Index top = re.values.size() - 1;
    if (re.values(top) <= 1e-14) break;
    const Tensor u(shape.dims(), re.vectors.col(top));
    const std::size_t before = pool.size();
    add(ProductVector::normalized(best_product_overlap(u, pricing).factors));
    for (std::uint64_t s = 0; s < 3; ++s) {
      const auto start = random_product(shape, derive_seed(opts.seed, 9000 + static_cast<std::uint64_t>(round) * 8 + s));
      add(ProductVector::normalized(alternating_ascent(u, start.factors(), 100, 1e-12).factors));
    }
    if (pool.size() == before) break;
  }

  std::vector<double> w;
  std::vector<ProductVector> states;
  for (std::size_t k = 0; k < static_cast<std::size_t>(weights.size()); ++k) {
    if (weights(static_cast<Eigen::Index>(k)) > 0.0) {
      w.push_back(weights(static_cast<Eigen::Index>(k)));
      states.push_back(pool[k]);
    }
  }
  SeparableDecomposition best = finish(rho, w, states);

  // Joint fit of the factors, starting from the nonnegative solution.
  if (!states.empty() && best.residual > 1e-14) {
    detail::FactorSet start;
    for (std::size_t k = 0; k < states.size(); ++k) {
      auto f = states[k].factors();
      f[0] *= std::sqrt(w[k]);
      start.push_back(std::move(f));
    }
    std::vector<double> fw;
    std::vector<ProductVector> fs;
    for (auto& f : detail::fit_separable(rho.matrix(), std::move(start), search.fit_iterations)) {
      double weight = 1.0;
      for (const auto& v : f) weight *= v.squaredNorm();
      if (weight <= 0.0 || !std::isfinite(weight)) continue;
      fw.push_back(weight);
      fs.push_back(ProductVector::normalized(std::move(f)));
    }
    SeparableDecomposition fitted = finish(rho, fw, fs);
    if (fitted.residual < best.residual) best = std::move(fitted);
  }
  return best;
}

}  // namespace entgeom
