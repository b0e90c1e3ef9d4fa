#include "entgeom/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "entgeom/linalg.hpp"

namespace entgeom {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

void check_square(const CMatrix& m, const SpaceShape& shape, const char* what) {
  const auto n = static_cast<Eigen::Index>(shape.total_dim());
  if (m.rows() != n || m.cols() != n) {
    throw ShapeError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", shape " + shape.to_string() + " needs " +
                     std::to_string(n) + "x" + std::to_string(n));
  }
}

}  // namespace

// --- SpaceShape -------------------------------------------------------------

SpaceShape::SpaceShape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw InvariantError("SpaceShape needs at least two slots");
  for (std::size_t d : dims_) {
    if (d == 0) throw InvariantError("SpaceShape dimensions must be positive");
    if (total_ > kMaxTotalDim / d) {
      throw InvariantError("SpaceShape total dimension exceeds 2^20");
    }
    total_ *= d;
  }
}

std::size_t SpaceShape::dim(std::size_t slot) const {
  if (slot >= dims_.size()) throw BoundsError("slot " + std::to_string(slot) + " out of range");
  return dims_[slot];
}

SpaceShape SpaceShape::sorted() const {
  auto d = dims_;
  std::sort(d.begin(), d.end());
  return SpaceShape(std::move(d));
}

std::string SpaceShape::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "," : "") << dims_[k];
  os << ')';
  return os.str();
}

std::size_t flatten_index(const SpaceShape& shape, std::span<const std::size_t> multi_index) {
  if (multi_index.size() != shape.rank()) {
    throw BoundsError("multi-index has " + std::to_string(multi_index.size()) + " entries, shape has " +
                      std::to_string(shape.rank()) + " slots");
  }
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    if (multi_index[k] >= shape.dim(k)) {
      throw BoundsError("index " + std::to_string(multi_index[k]) + " out of range for slot " +
                        std::to_string(k) + " of " + shape.to_string());
    }
    flat = flat * shape.dim(k) + multi_index[k];
  }
  return flat;
}

std::vector<std::size_t> unflatten_index(const SpaceShape& shape, std::size_t flat) {
  if (flat >= shape.total_dim()) throw BoundsError("flat index out of range");
  std::vector<std::size_t> idx(shape.rank());
  for (std::size_t k = shape.rank(); k-- > 0;) {
    idx[k] = flat % shape.dim(k);
    flat /= shape.dim(k);
  }
  return idx;
}

std::size_t product_of(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// --- Tensor -----------------------------------------------------------------

Tensor::Tensor(std::vector<std::size_t> dims, CVector data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (dims_.empty()) throw InvariantError("Tensor needs at least one slot");
  if (product_of(dims_) != static_cast<std::size_t>(data_.size())) {
    throw ShapeError("Tensor data length " + std::to_string(data_.size()) + " does not match dims product " +
                     std::to_string(product_of(dims_)));
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> dims) {
  const auto n = static_cast<Eigen::Index>(product_of(dims));
  return Tensor(std::move(dims), CVector::Zero(n));
}

Tensor Tensor::permuted(std::span<const std::size_t> order) const {
  if (order.size() != rank()) throw ShapeError("permutation length mismatch");
  std::vector<std::size_t> new_dims(rank());
  for (std::size_t k = 0; k < rank(); ++k) new_dims[k] = dims_.at(order[k]);
  const auto old_strides = strides_of(dims_);
  CVector out(data_.size());
  std::vector<std::size_t> idx(rank(), 0);
  for (Eigen::Index flat = 0; flat < out.size(); ++flat) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < rank(); ++k) src += idx[k] * old_strides[order[k]];
    out(flat) = data_(static_cast<Eigen::Index>(src));
    for (std::size_t k = rank(); k-- > 0;) {
      if (++idx[k] < new_dims[k]) break;
      idx[k] = 0;
    }
  }
  return Tensor(std::move(new_dims), std::move(out));
}

namespace {

std::vector<std::size_t> row_then_col_order(std::size_t rank, std::span<const std::size_t> row_slots) {
  std::vector<bool> is_row(rank, false);
  std::vector<std::size_t> order;
  for (std::size_t s : row_slots) {
    if (s >= rank || is_row[s]) throw BoundsError("invalid row slot set");
    is_row[s] = true;
    order.push_back(s);
  }
  for (std::size_t s = 0; s < rank; ++s) {
    if (!is_row[s]) order.push_back(s);
  }
  return order;
}

}  // namespace

CMatrix Tensor::matricize(std::span<const std::size_t> row_slots) const {
  const auto order = row_then_col_order(rank(), row_slots);
  std::size_t rows = 1;
  for (std::size_t s : row_slots) rows *= dims_[s];
  const std::size_t cols = size() / rows;
  const Tensor p = permuted(order);
  // p is row-major over (rows, cols); Eigen is column-major.
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          p.data_(static_cast<Eigen::Index>(r * cols + c));
    }
  }
  return m;
}

Tensor Tensor::from_matrix(std::vector<std::size_t> dims, std::span<const std::size_t> row_slots,
                           const CMatrix& matrix) {
  const auto order = row_then_col_order(dims.size(), row_slots);
  std::vector<std::size_t> permuted_dims(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) permuted_dims[k] = dims[order[k]];
  const std::size_t total = product_of(dims);
  if (static_cast<std::size_t>(matrix.size()) != total) throw ShapeError("matrix size does not match dims");
  const auto cols = static_cast<std::size_t>(matrix.cols());
  CVector flat(static_cast<Eigen::Index>(total));
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      flat(static_cast<Eigen::Index>(static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(c))) =
          matrix(r, c);
    }
  }
  Tensor p(std::move(permuted_dims), std::move(flat));
  std::vector<std::size_t> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = k;
  return p.permuted(inverse);
}

CVector Tensor::contract_except(std::span<const CVector> factors, std::size_t free) const {
  if (factors.size() != rank() || free >= rank()) throw ShapeError("contract_except: factor count mismatch");
  CVector current = data_;
  std::size_t lead = size();
  // Slots after `free`, from the back.
  for (std::size_t s = rank(); s-- > free + 1;) {
    const std::size_t d = dims_[s];
    lead /= d;
    // current viewed as (lead, d) row-major -> contract with conj(f)
    CVector next(static_cast<Eigen::Index>(lead));
    const CVector& f = factors[s];
    for (std::size_t i = 0; i < lead; ++i) {
      Complex acc = 0;
      for (std::size_t j = 0; j < d; ++j) {
        acc += std::conj(f(static_cast<Eigen::Index>(j))) * current(static_cast<Eigen::Index>(i * d + j));
      }
      next(static_cast<Eigen::Index>(i)) = acc;
    }
    current = std::move(next);
  }
  // current now spans slots 0..free; contract the leading ones from the front.
  std::size_t len = lead;
  for (std::size_t s = 0; s < free; ++s) {
    const std::size_t d = dims_[s];
    const std::size_t rest = len / d;
    CVector next = CVector::Zero(static_cast<Eigen::Index>(rest));
    const CVector& f = factors[s];
    for (std::size_t j = 0; j < d; ++j) {
      const Complex w = std::conj(f(static_cast<Eigen::Index>(j)));
      next += w * current.segment(static_cast<Eigen::Index>(j * rest), static_cast<Eigen::Index>(rest));
    }
    current = std::move(next);
    len = rest;
  }
  return current;
}

Tensor Tensor::contract_slot(std::size_t slot, const CVector& v) const {
  if (slot >= rank() || static_cast<std::size_t>(v.size()) != dims_[slot]) {
    throw ShapeError("contract_slot: vector length mismatch");
  }
  std::vector<std::size_t> out_dims;
  for (std::size_t k = 0; k < rank(); ++k) {
    if (k != slot) out_dims.push_back(dims_[k]);
  }
  if (out_dims.empty()) out_dims.push_back(1);
  std::size_t outer = 1;
  for (std::size_t k = 0; k < slot; ++k) outer *= dims_[k];
  std::size_t inner = 1;
  for (std::size_t k = slot + 1; k < rank(); ++k) inner *= dims_[k];
  const std::size_t d = dims_[slot];
  CVector out = CVector::Zero(static_cast<Eigen::Index>(outer * inner));
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t j = 0; j < d; ++j) {
      const Complex w = std::conj(v(static_cast<Eigen::Index>(j)));
      out.segment(static_cast<Eigen::Index>(o * inner), static_cast<Eigen::Index>(inner)) +=
          w * data_.segment(static_cast<Eigen::Index>((o * d + j) * inner), static_cast<Eigen::Index>(inner));
    }
  }
  return Tensor(std::move(out_dims), std::move(out));
}

// --- ProductVector ----------------------------------------------------------

ProductVector::ProductVector(std::vector<CVector> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvariantError("ProductVector needs at least one factor");
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (factors_[k].size() == 0 || std::abs(factors_[k].norm() - 1.0) > kConstructionTolerance) {
      throw InvariantError("ProductVector factor " + std::to_string(k) + " is not a unit vector");
    }
  }
}

ProductVector ProductVector::normalized(std::vector<CVector> factors) {
  for (auto& f : factors) {
    const double n = f.norm();
    if (!(n > 0.0)) throw InvariantError("ProductVector factor is zero");
    f /= n;
  }
  return ProductVector(std::move(factors));
}

std::vector<std::size_t> ProductVector::dims() const {
  std::vector<std::size_t> d;
  for (const auto& f : factors_) d.push_back(static_cast<std::size_t>(f.size()));
  return d;
}

Tensor ProductVector::expand() const {
  CVector acc = factors_.front();
  for (std::size_t k = 1; k < factors_.size(); ++k) {
    const CVector& f = factors_[k];
    CVector next(acc.size() * f.size());
    for (Eigen::Index i = 0; i < acc.size(); ++i) next.segment(i * f.size(), f.size()) = acc(i) * f;
    acc = std::move(next);
  }
  return Tensor(dims(), std::move(acc));
}

Complex ProductVector::overlap(const Tensor& t) const {
  if (t.dims() != dims()) throw ShapeError("overlap: product vector and tensor dims differ");
  const CVector v = t.contract_except(factors_, 0);
  return factors_[0].dot(v);
}

// --- PureState / operators --------------------------------------------------

PureState::PureState(SpaceShape shape, CVector amplitudes, double tolerance)
    : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != shape_.total_dim()) {
    throw ShapeError("PureState: " + std::to_string(amplitudes_.size()) + " amplitudes for shape " +
                     shape_.to_string());
  }
  const double n = amplitudes_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance) {
    throw InvariantError("PureState: amplitudes have norm " + std::to_string(n) + ", expected 1");
  }
}

PureState PureState::normalized(SpaceShape shape, CVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvariantError("PureState: cannot normalize a zero vector");
  return PureState(std::move(shape), amplitudes / n);
}

DensityOperator::DensityOperator(SpaceShape shape, CMatrix matrix, double tolerance)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  check_square(matrix_, shape_, "DensityOperator");
  if (!matrix_.allFinite()) throw InvariantError("DensityOperator: non-finite entries");
  if (linalg::hermiticity_defect(matrix_) > tolerance) {
    throw InvariantError("DensityOperator: matrix is not Hermitian");
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    throw InvariantError("DensityOperator: trace is " + std::to_string(tr) + ", expected 1");
  }
  const double min_eig = linalg::hermitian_eigen(matrix_).values(0);
  if (min_eig < -std::max(1e-8, tolerance)) {
    throw InvariantError("DensityOperator: negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
  return DensityOperator(state.shape(), state.amplitudes() * state.amplitudes().adjoint());
}

DensityOperator DensityOperator::mixture(std::span<const double> weights, std::span<const PureState> states) {
  if (weights.size() != states.size() || states.empty()) throw ShapeError("mixture: weights/states mismatch");
  const SpaceShape& shape = states.front().shape();
  const auto n = static_cast<Eigen::Index>(shape.total_dim());
  CMatrix m = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!(states[k].shape() == shape)) throw ShapeError("mixture: states have different shapes");
    if (weights[k] < 0.0) throw InvariantError("mixture: negative weight");
    m += weights[k] * states[k].amplitudes() * states[k].amplitudes().adjoint();
  }
  return DensityOperator(shape, std::move(m));
}

HermitianOperator::HermitianOperator(SpaceShape shape, CMatrix matrix, double tolerance)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
  check_square(matrix_, shape_, "HermitianOperator");
  if (linalg::hermiticity_defect(matrix_) > tolerance) {
    throw InvariantError("HermitianOperator: matrix is not Hermitian");
  }
}

PureState expand_product(const ProductVector& p, const SpaceShape& shape) {
  if (p.dims() != shape.dims()) throw ShapeError("expand_product: factor lengths do not match " + shape.to_string());
  return PureState(shape, p.expand().data());
}

CMatrix matricize(const PureState& state, std::size_t split) {
  const std::size_t n = state.shape().rank();
  if (split < 1 || split > n - 1) throw BoundsError("matricize: split must lie in [1, N-1]");
  const auto rows = static_cast<Eigen::Index>(product_of(std::span(state.shape().dims()).first(split)));
  const Eigen::Index cols = static_cast<Eigen::Index>(state.shape().total_dim()) / rows;
  // Slot-1-slowest flattening is row-major over (rows, cols).
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = state.amplitudes().segment(r * cols, cols).transpose();
  return m;
}

Marginal partial_trace_last(const DensityOperator& rho) {
  const SpaceShape& shape = rho.shape();
  const auto m = static_cast<Eigen::Index>(shape.leading_dim());
  const auto d = static_cast<Eigen::Index>(shape.last_dim());
  CMatrix out = CMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      Complex acc = 0;
      for (Eigen::Index k = 0; k < d; ++k) acc += rho.matrix()(i * d + k, j * d + k);
      out(i, j) = acc;
    }
  }
  std::vector<std::size_t> dims(shape.dims().begin(), shape.dims().end() - 1);
  return {std::move(dims), std::move(out)};
}

Tensor operator_as_tensor(const CMatrix& op, const SpaceShape& shape) {
  const auto n = static_cast<Eigen::Index>(shape.total_dim());
  if (op.rows() != n || op.cols() != n) throw ShapeError("operator_as_tensor: size mismatch");
  // Start from (out_1..out_N, in_1..in_N), row-major over (out, in).
  std::vector<std::size_t> dims = shape.dims();
  dims.insert(dims.end(), shape.dims().begin(), shape.dims().end());
  CVector flat(n * n);
  for (Eigen::Index r = 0; r < n; ++r) flat.segment(r * n, n) = op.row(r).transpose();
  const Tensor grouped(dims, std::move(flat));
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < shape.rank(); ++k) {
    order.push_back(k);
    order.push_back(k + shape.rank());
  }
  return grouped.permuted(order);
}

CMatrix operator_from_tensor(const Tensor& t, const SpaceShape& shape) {
  const std::size_t n = shape.rank();
  if (t.rank() != 2 * n) throw ShapeError("operator_from_tensor: rank mismatch");
  std::vector<std::size_t> rows;
  for (std::size_t k = 0; k < n; ++k) rows.push_back(2 * k);
  return t.matricize(rows);
}

CVector apply_local(const SpaceShape& shape, const CVector& amplitudes, std::size_t slot, const CMatrix& local) {
  const std::size_t d = shape.dim(slot);
  if (local.rows() != static_cast<Eigen::Index>(d) || local.cols() != static_cast<Eigen::Index>(d)) {
    throw ShapeError("apply_local: operator size does not match slot dimension");
  }
  std::size_t outer = 1;
  for (std::size_t k = 0; k < slot; ++k) outer *= shape.dim(k);
  const std::size_t inner = shape.total_dim() / (outer * d);
  CVector out = CVector::Zero(amplitudes.size());
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const Complex w = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (w == Complex(0)) continue;
        out.segment(static_cast<Eigen::Index>((o * d + i) * inner), static_cast<Eigen::Index>(inner)) +=
            w * amplitudes.segment(static_cast<Eigen::Index>((o * d + j) * inner), static_cast<Eigen::Index>(inner));
      }
    }
  }
  return out;
}

PureState permute_slots(const PureState& state, std::span<const std::size_t> order) {
  Tensor t = state.as_tensor().permuted(order);
  return PureState(SpaceShape(t.dims()), t.data());
}

}  // namespace entgeom
