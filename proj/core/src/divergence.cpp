#include "entgeom/divergence.hpp"

#include <cmath>
#include <string>

#include "entgeom/errors.hpp"

namespace entgeom {

DivergentState build_divergent(int k_max, double theta_base, std::size_t dim_base, const SolverOptions& opts) {
  if (k_max < 1) throw PreconditionError("build_divergent: K must be at least 1");
  if (!(theta_base > 0.0 && theta_base < 1.0)) throw PreconditionError("build_divergent: theta_base must lie in (0, 1)");
  if (dim_base < 2) throw PreconditionError("build_divergent: dim_base must be at least 2");

  std::vector<std::size_t> dims;
  std::size_t side = 0;
  std::size_t n = 1;
  for (int k = 1; k <= k_max; ++k) {
    n *= dim_base;
    side += n;
    if (side > kDivergenceMaxSide) {
      throw ShapeError("build_divergent: side " + std::to_string(side) + " at K=" + std::to_string(k) +
                       " exceeds the cap of " + std::to_string(kDivergenceMaxSide));
    }
    dims.push_back(n);
  }

  DivergentState out;
  out.side = side;
  out.schmidt.resize(static_cast<Eigen::Index>(side));
  double theta = 1.0;
  double sum_theta = 0.0;
  Eigen::Index offset = 0;
  for (int k = 1; k <= k_max; ++k) {
    theta *= theta_base;
    const std::size_t nk = dims[static_cast<std::size_t>(k - 1)];
    const double coefficient = std::sqrt(theta / static_cast<double>(nk));
    out.schmidt.segment(offset, static_cast<Eigen::Index>(nk)).setConstant(coefficient);
    offset += static_cast<Eigen::Index>(nk);
    sum_theta += theta;

    DivergenceRow row;
    row.k = k;
    row.block_dim = nk;
    row.theta = theta;
    row.block_bound = std::sqrt(theta * static_cast<double>(nk));
    out.nuclear_norm += row.block_bound;
    row.cumulative_nuclear = out.nuclear_norm;
    // sum_j e_j (x) f_j is the vectorized identity.
    CVector block = CVector::Zero(static_cast<Eigen::Index>(nk * nk));
    for (std::size_t j = 0; j < nk; ++j) block(static_cast<Eigen::Index>(j * nk + j)) = 1.0;
    row.block_injective = injective_norm(Tensor({nk, nk}, std::move(block)), opts);
    out.rows.push_back(std::move(row));
  }
  out.raw_norm = std::sqrt(sum_theta);
  out.schmidt /= out.raw_norm;

  if (side <= kDivergenceMaxDenseSide) {
    CVector amplitudes = CVector::Zero(static_cast<Eigen::Index>(side * side));
    for (std::size_t j = 0; j < side; ++j) amplitudes(static_cast<Eigen::Index>(j * side + j)) = out.schmidt(static_cast<Eigen::Index>(j));
    out.state = PureState::normalized(SpaceShape({side, side}), std::move(amplitudes));
  }
  return out;
}

}  // namespace entgeom
