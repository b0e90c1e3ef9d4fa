#include "entgeom/sphere_cover.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <Eigen/Eigenvalues>

namespace entgeom {

namespace {

constexpr double kPi = std::numbers::pi;

// G(x) = g0 + x0 g1 + x1 g2 + x2 g3 for Bloch vector x = (x, y, z).
struct AffineGram {
  std::array<CMatrix, 4> terms;

  double lambda_max(const Eigen::Vector3d& x) const {
    const Eigen::Index n = terms[0].rows();
    if (n == 1) {
      return (terms[0](0, 0) + x(0) * terms[1](0, 0) + x(1) * terms[2](0, 0) + x(2) * terms[3](0, 0)).real();
    }
    if (n == 2) {
      Complex g[2][2];
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          g[i][j] = terms[0](i, j) + x(0) * terms[1](i, j) + x(1) * terms[2](i, j) + x(2) * terms[3](i, j);
        }
      }
      const double a = g[0][0].real();
      const double d = g[1][1].real();
      return 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + std::norm(g[0][1]));
    }
    const CMatrix g = terms[0] + x(0) * terms[1] + x(1) * terms[2] + x(2) * terms[3];
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(g, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(n - 1);
  }
};

Eigen::Vector3d bloch_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

CVector bloch_point(double theta, double phi) {
  CVector a(2);
  a(0) = std::cos(0.5 * theta);
  a(1) = std::polar(std::sin(0.5 * theta), phi);
  return a;
}

struct Cell {
  double theta_lo, theta_hi, phi_lo, phi_hi;
  double bound;  // certified upper bound of lambda_max over the cell
  friend bool operator<(const Cell& a, const Cell& b) { return a.bound < b.bound; }
};

}  // namespace

std::optional<SphereCoverResult> sphere_cover_bound(const Tensor& t, std::size_t slot, double lower,
                                                    std::size_t budget, double tolerance) {
  if (t.rank() != 3 || slot >= 3 || t.dims()[slot] != 2) return std::nullopt;

  const std::size_t row_slot[] = {0};
  CMatrix b0 = t.contract_slot(slot, (CVector(2) << 1.0, 0.0).finished()).matricize(row_slot);
  CMatrix b1 = t.contract_slot(slot, (CVector(2) << 0.0, 1.0).finished()).matricize(row_slot);
  if (b0.rows() > b0.cols()) {
    b0.transposeInPlace();
    b1.transposeInPlace();
  }
  // M(a) = conj(a0) b0 + conj(a1) b1 and |a><a| = (I + x.sigma) / 2 give
  // M M^H = sum_ij P_ji b_i b_j^H.
  const CMatrix b00 = b0 * b0.adjoint();
  const CMatrix b11 = b1 * b1.adjoint();
  const CMatrix b01 = b0 * b1.adjoint();
  const CMatrix b10 = b1 * b0.adjoint();
  const Complex i_unit(0.0, 1.0);
  AffineGram gram{{0.5 * (b00 + b11), 0.5 * (b01 + b10), 0.5 * i_unit * (b01 - b10), 0.5 * (b00 - b11)}};

  SphereCoverResult result;
  auto visit_centre = [&](double theta, double phi) {
    const double v = std::sqrt(std::max(0.0, gram.lambda_max(bloch_vector(theta, phi))));
    if (v > result.best_value) {
      result.best_value = v;
      result.best_point = bloch_point(theta, phi);
    }
  };

  auto make_cell = [&](double t0, double t1, double p0, double p1) {
    ++result.evaluations;
    const double tc = 0.5 * (t0 + t1);
    const double pc = 0.5 * (p0 + p1);
    visit_centre(tc, pc);
    // Angular radius of the cell around its centre: a meridian step plus a
    // latitude step, which subtends at most sin(theta) * dphi.
    const double max_sin = (t0 <= 0.5 * kPi && t1 >= 0.5 * kPi) ? 1.0 : std::max(std::sin(t0), std::sin(t1));
    const double delta = 0.5 * (t1 - t0) + 0.5 * (p1 - p0) * max_sin;
    double bound = 0.0;
    if (delta >= 0.5 * kPi) {
      // The cube [-1, 1]^3 contains the ball.
      for (int m = 0; m < 8; ++m) {
        bound = std::max(bound, gram.lambda_max({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0}));
      }
    } else {
      // Hexagonal prism around the cap {x on S^2 : angle(x, c) <= delta}.
      const Eigen::Vector3d c = bloch_vector(tc, pc);
      const Eigen::Vector3d e1 = Eigen::Vector3d(std::cos(tc) * std::cos(pc), std::cos(tc) * std::sin(pc), -std::sin(tc));
      const Eigen::Vector3d e2 = c.cross(e1);
      const double radius = std::sin(delta) / std::cos(kPi / 6.0);
      const double heights[2] = {std::cos(delta), 1.0};
      for (int k = 0; k < 6; ++k) {
        const double ang = kPi * k / 3.0;
        const Eigen::Vector3d lateral = radius * (std::cos(ang) * e1 + std::sin(ang) * e2);
        for (double h : heights) bound = std::max(bound, gram.lambda_max(h * c + lateral));
      }
    }
    return Cell{t0, t1, p0, p1, bound};
  };

  std::priority_queue<Cell> heap;
  constexpr int kThetaCells = 8;
  constexpr int kPhiCells = 16;
  for (int i = 0; i < kThetaCells; ++i) {
    for (int j = 0; j < kPhiCells; ++j) {
      heap.push(make_cell(kPi * i / kThetaCells, kPi * (i + 1) / kThetaCells, 2 * kPi * j / kPhiCells,
                          2 * kPi * (j + 1) / kPhiCells));
    }
  }

  const double margin = 1e-13;
  double top_bound = 0.0;
  while (true) {
    const Cell top = heap.top();
    top_bound = std::sqrt(std::max(0.0, top.bound)) + margin;
    const double reference = std::max(lower, result.best_value);
    if (top_bound <= reference + tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations + 2 > budget) break;
    heap.pop();
    const double theta_extent = top.theta_hi - top.theta_lo;
    const double phi_extent = (top.phi_hi - top.phi_lo) * std::sin(0.5 * (top.theta_lo + top.theta_hi));
    if (theta_extent >= phi_extent) {
      const double mid = 0.5 * (top.theta_lo + top.theta_hi);
      heap.push(make_cell(top.theta_lo, mid, top.phi_lo, top.phi_hi));
      heap.push(make_cell(mid, top.theta_hi, top.phi_lo, top.phi_hi));
    } else {
      const double mid = 0.5 * (top.phi_lo + top.phi_hi);
      heap.push(make_cell(top.theta_lo, top.theta_hi, top.phi_lo, mid));
      heap.push(make_cell(top.theta_lo, top.theta_hi, mid, top.phi_hi));
    }
  }
  // Every point of the sphere lies in a leaf and the heap top bounds all leaves.
  result.upper = std::max(top_bound, result.best_value);
  return result;
}

}  // namespace entgeom
