#include "factor_polish.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Cholesky>

namespace entgeom::detail {

namespace {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Real parametrization: x = [Re z; Im z] with z the concatenated factors.
struct Layout {
  std::vector<std::size_t> dims;
  std::size_t terms = 0;
  std::size_t per_term = 0;

  Eigen::Index complex_size() const { return static_cast<Eigen::Index>(terms * per_term); }

  RealVector pack(const FactorSet& f) const {
    const Eigen::Index p = complex_size();
    RealVector x(2 * p);
    Eigen::Index o = 0;
    for (const auto& term : f) {
      for (const auto& v : term) {
        for (Eigen::Index a = 0; a < v.size(); ++a, ++o) {
          x(o) = v(a).real();
          x(o + p) = v(a).imag();
        }
      }
    }
    return x;
  }

  FactorSet unpack(const RealVector& x) const {
    const Eigen::Index p = complex_size();
    FactorSet f(terms);
    Eigen::Index o = 0;
    for (auto& term : f) {
      for (std::size_t d : dims) {
        CVector v(static_cast<Eigen::Index>(d));
        for (Eigen::Index a = 0; a < v.size(); ++a, ++o) v(a) = Complex(x(o), x(o + p));
        term.push_back(std::move(v));
      }
    }
    return f;
  }
};

Layout layout_of(const FactorSet& f) {
  Layout l;
  l.terms = f.size();
  for (const auto& v : f.front()) {
    l.dims.push_back(static_cast<std::size_t>(v.size()));
    l.per_term += static_cast<std::size_t>(v.size());
  }
  return l;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CVector kron_range(const std::vector<CVector>& f, std::size_t from, std::size_t to) {
  CVector out = CVector::Ones(1);
  for (std::size_t k = from; k < to; ++k) out = kron(out, f[k]);
  return out;
}

// Calls visit(column, derivative) for every complex entry of every factor of
// one term, where derivative is d((x)_k f_k) / d f_slot(a).
template <typename Visit>
void for_each_partial(const std::vector<CVector>& f, Eigen::Index first_column, Visit&& visit) {
  Eigen::Index col = first_column;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const CVector left = kron_range(f, 0, k);
    const CVector right = kron_range(f, k + 1, f.size());
    const Eigen::Index d = f[k].size();
    const Eigen::Index r = right.size();
    CVector partial = CVector::Zero(left.size() * d * r);
    for (Eigen::Index a = 0; a < d; ++a, ++col) {
      for (Eigen::Index i = 0; i < left.size(); ++i) partial.segment((i * d + a) * r, r) = left(i) * right;
      visit(col, partial);
      for (Eigen::Index i = 0; i < left.size(); ++i) partial.segment((i * d + a) * r, r).setZero();
    }
  }
}

// Levenberg-Marquardt with identity damping. The step
//   (J^T J + lambda I)^{-1} J^T r = J^T (J J^T + lambda I)^{-1} r
// is solved in the residual space, which is the smaller side here.
using ResidualFn = std::function<void(const RealVector& x, RealVector& r, RealMatrix* jac)>;

RealVector levenberg_marquardt(const ResidualFn& fn, RealVector x, int max_iterations) {
  RealVector r;
  RealMatrix jac;
  fn(x, r, &jac);
  double cost = r.squaredNorm();
  double lambda = -1.0;
  double nu = 2.0;
  RealVector r_trial;
  for (int it = 0; it < max_iterations && cost > 0.0; ++it) {
    const bool wide = jac.rows() <= jac.cols();
    RealVector step;
    RealMatrix normal = wide ? RealMatrix(jac * jac.transpose()) : RealMatrix(jac.transpose() * jac);
    if (lambda < 0.0) lambda = 1e-3 * std::max(normal.diagonal().maxCoeff(), 1e-300);
    normal.diagonal().array() += lambda;
    Eigen::LLT<RealMatrix> llt(normal);
    if (llt.info() != Eigen::Success) {
      lambda *= nu;
      nu *= 2.0;
      continue;
    }
    step = wide ? RealVector(-jac.transpose() * llt.solve(r)) : RealVector(-llt.solve(jac.transpose() * r));
    if (step.norm() <= 1e-15 * (x.norm() + 1e-15)) break;
    const RealVector x_trial = x + step;
    fn(x_trial, r_trial, nullptr);
    const double trial_cost = r_trial.squaredNorm();
    // Predicted decrease of the linear model, computed stably.
    const RealVector jstep = jac * step;
    const double predicted = -2.0 * step.dot(jac.transpose() * r) - jstep.squaredNorm();
    const double rho = predicted > 0.0 ? (cost - trial_cost) / predicted : -1.0;
    if (std::isfinite(trial_cost) && rho > 0.0) {
      const double relative = (cost - trial_cost) / cost;
      x = x_trial;
      cost = trial_cost;
      fn(x, r, &jac);
      lambda *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      nu = 2.0;
      if (relative < 1e-12) break;
    } else {
      lambda *= nu;
      nu *= 2.0;
      if (lambda > 1e300) break;
    }
  }
  return x;
}

}  // namespace

// Independent real coordinates of a Hermitian d x d matrix: the diagonal,
// then sqrt(2) times the real and imaginary parts of the strict upper
// triangle, so the Euclidean norm equals the Frobenius norm.
Eigen::VectorXd hermitian_coordinates(const CMatrix& h) {
  const Eigen::Index d = h.rows();
  Eigen::VectorXd out(d * d);
  Eigen::Index o = 0;
  for (Eigen::Index i = 0; i < d; ++i) out(o++) = h(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out(o++) = std::sqrt(2.0) * h(i, j).real();
      out(o++) = std::sqrt(2.0) * h(i, j).imag();
    }
  }
  return out;
}

std::vector<CVector> balanced_factors(Complex coefficient, const std::vector<CVector>& unit_factors) {
  const double scale = std::pow(std::abs(coefficient), 1.0 / static_cast<double>(unit_factors.size()));
  const Complex phase = std::abs(coefficient) > 0.0 ? coefficient / std::abs(coefficient) : Complex(1.0);
  std::vector<CVector> out;
  for (std::size_t k = 0; k < unit_factors.size(); ++k) {
    out.push_back((k == 0 ? phase * scale : Complex(scale)) * unit_factors[k]);
  }
  return out;
}

FactorSet polish_decomposition(const Tensor& t, FactorSet start, int max_iterations) {
  if (start.empty()) return start;
  const Layout layout = layout_of(start);
  const CVector& target = t.data();
  const Eigen::Index n = target.size();
  const Eigen::Index p = layout.complex_size();
  const double order = static_cast<double>(layout.dims.size());
  const Eigen::Index rows = 2 * n + static_cast<Eigen::Index>(layout.terms * layout.dims.size());
  double weight = 1.0;

  const ResidualFn fn = [&](const RealVector& x, RealVector& r, RealMatrix* jac) {
    const FactorSet f = layout.unpack(x);
    CVector diff = target;
    for (const auto& term : f) diff -= kron_range(term, 0, term.size());
    r.resize(rows);
    r.head(n) = weight * diff.real();
    r.segment(n, n) = weight * diff.imag();
    Eigen::Index o = 2 * n;
    for (const auto& term : f) {
      for (const auto& v : term) r(o++) = std::pow(v.squaredNorm(), order / 4.0) / std::sqrt(order);
    }
    if (jac == nullptr) return;
    jac->setZero(rows, 2 * p);
    Eigen::Index first = 0;
    Eigen::Index cost_row = 2 * n;
    for (const auto& term : f) {
      for_each_partial(term, first, [&](Eigen::Index col, const CVector& d) {
        // A real step in the entry moves the residual by -d, an imaginary one by -i d.
        jac->block(0, col, n, 1) = -weight * d.real();
        jac->block(n, col, n, 1) = -weight * d.imag();
        jac->block(0, col + p, n, 1) = weight * d.imag();
        jac->block(n, col + p, n, 1) = -weight * d.real();
      });
      for (const auto& v : term) {
        const double s = v.squaredNorm();
        const double scale = s > 0.0 ? (order / 2.0) * std::pow(s, order / 4.0 - 1.0) / std::sqrt(order) : 0.0;
        for (Eigen::Index a = 0; a < v.size(); ++a, ++first) {
          (*jac)(cost_row, first) = scale * v(a).real();
          (*jac)(cost_row, first + p) = scale * v(a).imag();
        }
        ++cost_row;
      }
    }
  };

  RealVector x = layout.pack(start);
  for (double penalty = 1e2; penalty <= 1e12; penalty *= 100.0) {
    weight = std::sqrt(penalty);
    const RealVector trial = levenberg_marquardt(fn, x, max_iterations);
    if (trial.allFinite()) x = trial;
  }
  return layout.unpack(x);
}

FactorSet fit_separable(const CMatrix& target, FactorSet start, int max_iterations) {
  if (start.empty()) return start;
  const Layout layout = layout_of(start);
  const RealVector goal = hermitian_coordinates(target);
  const Eigen::Index p = layout.complex_size();
  const Eigen::Index dim = target.rows();

  const ResidualFn fn = [&](const RealVector& x, RealVector& r, RealMatrix* jac) {
    const FactorSet f = layout.unpack(x);
    std::vector<CVector> expanded;
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const auto& term : f) {
      expanded.push_back(kron_range(term, 0, term.size()));
      sum.noalias() += expanded.back() * expanded.back().adjoint();
    }
    r = hermitian_coordinates(sum) - goal;
    if (jac == nullptr) return;
    jac->setZero(goal.size(), 2 * p);
    Eigen::Index first = 0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const CVector& v = expanded[j];
      for_each_partial(f[j], first, [&](Eigen::Index col, const CVector& d) {
        const CMatrix dv = d * v.adjoint();
        // d(vv^H) is dv + dv^H for a real step and i(dv - dv^H) for an imaginary one.
        jac->col(col) = hermitian_coordinates(dv + dv.adjoint());
        jac->col(col + p) = hermitian_coordinates(Complex(0.0, 1.0) * (dv - dv.adjoint()));
      });
      first += static_cast<Eigen::Index>(layout.per_term);
    }
  };

  const RealVector x = levenberg_marquardt(fn, layout.pack(start), max_iterations);
  return x.allFinite() ? layout.unpack(x) : start;
}

}  // namespace entgeom::detail
