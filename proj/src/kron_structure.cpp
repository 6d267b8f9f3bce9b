#include "mpencil/kron_structure.hpp"

#include <algorithm>
#include <cmath>

namespace mpencil {

namespace {

void require_positive(Index n, const char* what) {
  if (n < 1)
    throw PreconditionError(std::string(what) + ": dimension must be >= 1");
}

// vec position of entry (row, col) of an n×n matrix.
inline Index vec_pos(Index row, Index col, Index n) { return col * n + row; }

} // namespace

SparseZeroOneMatrix::SparseZeroOneMatrix(Index rows, Index cols,
                                         std::vector<SparseEntry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ < 0 || cols_ < 0)
    throw PreconditionError("SparseZeroOneMatrix: negative dimension");
  std::sort(entries_.begin(), entries_.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& t = entries_[e];
    if (t.row < 0 || t.row >= rows_ || t.col < 0 || t.col >= cols_)
      throw PreconditionError("SparseZeroOneMatrix: entry out of range");
    if (t.value == 0.0)
      throw PreconditionError("SparseZeroOneMatrix: stored zero");
    if (e > 0 && entries_[e - 1].row == t.row && entries_[e - 1].col == t.col)
      throw PreconditionError("SparseZeroOneMatrix: duplicate entry");
  }
}

bool SparseZeroOneMatrix::is_row_selection() const {
  if (static_cast<Index>(entries_.size()) != rows_) return false;
  for (Index r = 0; r < rows_; ++r) {
    const auto& t = entries_[static_cast<std::size_t>(r)];
    if (t.row != r || t.value != 1.0) return false;
  }
  return true;
}

SparseZeroOneMatrix::Storage SparseZeroOneMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(entries_.size());
  for (const auto& t : entries_) trips.emplace_back(t.row, t.col, t.value);
  Storage s(rows_, cols_);
  s.setFromTriplets(trips.begin(), trips.end());
  return s;
}

Eigen::MatrixXd SparseZeroOneMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& t : entries_) d(t.row, t.col) = t.value;
  return d;
}

SparseZeroOneMatrix SparseZeroOneMatrix::transpose() const {
  std::vector<SparseEntry> out;
  out.reserve(entries_.size());
  for (const auto& t : entries_) out.push_back({t.col, t.row, t.value});
  return {cols_, rows_, std::move(out)};
}

ComplexVector SparseZeroOneMatrix::apply(const ComplexVector& v) const {
  if (v.size() != cols_)
    throw ShapeError("SparseZeroOneMatrix::apply: expected length " + std::to_string(cols_));
  ComplexVector out = ComplexVector::Zero(rows_);
  for (const auto& t : entries_) out(t.row) += t.value * v(t.col);
  return out;
}

SparseZeroOneMatrix SparseZeroOneMatrix::from_storage(const Storage& s) {
  std::vector<SparseEntry> out;
  for (Index r = 0; r < s.outerSize(); ++r)
    for (Storage::InnerIterator it(s, r); it; ++it)
      if (it.value() != 0.0) out.push_back({it.row(), it.col(), it.value()});
  return {s.rows(), s.cols(), std::move(out)};
}

SparseZeroOneMatrix operator*(const SparseZeroOneMatrix& a, const SparseZeroOneMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("SparseZeroOneMatrix product: inner dimension mismatch");
  SparseZeroOneMatrix::Storage prod = (a.to_sparse() * b.to_sparse()).pruned();
  return SparseZeroOneMatrix::from_storage(prod);
}

SparseZeroOneMatrix operator+(const SparseZeroOneMatrix& a, const SparseZeroOneMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("SparseZeroOneMatrix sum: dimension mismatch");
  SparseZeroOneMatrix::Storage sum = (a.to_sparse() + b.to_sparse()).pruned();
  return SparseZeroOneMatrix::from_storage(sum);
}

SparseZeroOneMatrix operator*(double s, const SparseZeroOneMatrix& a) {
  if (s == 0.0) return {a.rows(), a.cols(), {}};
  std::vector<SparseEntry> out = a.entries();
  for (auto& t : out) t.value *= s;
  return {a.rows(), a.cols(), std::move(out)};
}

bool operator==(const SparseZeroOneMatrix& a, const SparseZeroOneMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

SparseZeroOneMatrix SparseZeroOneMatrix::identity(Index n) {
  std::vector<SparseEntry> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back({i, i, 1.0});
  return {n, n, std::move(out)};
}

SparseZeroOneMatrix SparseZeroOneMatrix::vstack(const SparseZeroOneMatrix& top,
                                                const SparseZeroOneMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw ShapeError("vstack: column mismatch");
  std::vector<SparseEntry> out = top.entries();
  for (auto t : bottom.entries()) {
    t.row += top.rows();
    out.push_back(t);
  }
  return {top.rows() + bottom.rows(), top.cols(), std::move(out)};
}

StrictPairIndex::StrictPairIndex(Index i, Index j, Index n) : i_(i), j_(j) {
  if (!(1 <= j && j < i && i <= n))
    throw PreconditionError("StrictPairIndex: need 1 <= j < i <= n");
  k_ = (j - 1) * n + i - j * (j + 1) / 2;
}

StrictPairIndex StrictPairIndex::from_linear(Index k, Index n) {
  if (k < 1 || k > skew_dim(n)) throw PreconditionError("StrictPairIndex: k out of range");
  // Column j holds n − j pairs.
  Index j = 1;
  Index first = 1;
  while (first + (n - j) <= k) {
    first += n - j;
    ++j;
  }
  return {j + 1 + (k - first), j, n};
}

std::vector<StrictPairIndex> strict_pairs(Index n) {
  std::vector<StrictPairIndex> pairs;
  pairs.reserve(static_cast<std::size_t>(skew_dim(n)));
  for (Index j = 1; j < n; ++j)
    for (Index i = j + 1; i <= n; ++i) pairs.emplace_back(i, j, n);
  return pairs;
}

ComplexVector vec(const ComplexDenseMatrix& z) {
  if (z.rows() != z.cols()) throw ShapeError("vec: square input required, got " + shape_string(z.rows(), z.cols()));
  return z.reshaped();
}

ComplexDenseMatrix unvec(const ComplexVector& z, Index n) {
  if (z.size() != n * n) throw ShapeError("unvec: length is not n^2");
  return z.reshaped(n, n);
}

SparseZeroOneMatrix commutation_matrix(Index n) {
  require_positive(n, "commutation_matrix");
  std::vector<SparseEntry> out;
  out.reserve(static_cast<std::size_t>(n * n));
  // Row vec_pos(i, j) picks vec_pos(j, i).
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) out.push_back({vec_pos(i, j, n), vec_pos(j, i, n), 1.0});
  return {n * n, n * n, std::move(out)};
}

Projectors projectors(Index n) {
  require_positive(n, "projectors");
  std::vector<SparseEntry> h, f;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const Index p = vec_pos(i, j, n);
      if (i == j) {
        h.push_back({p, p, 1.0});
      } else {
        const Index q = vec_pos(j, i, n);
        h.push_back({p, p, 0.5});
        h.push_back({p, q, 0.5});
        f.push_back({p, p, 0.5});
        f.push_back({p, q, -0.5});
      }
    }
  }
  return {{n * n, n * n, std::move(h)}, {n * n, n * n, std::move(f)}};
}

SelectionMatrices selection_matrices(Index n) {
  require_positive(n, "selection_matrices");
  std::vector<SparseEntry> d, l, u;
  for (Index i = 0; i < n; ++i) d.push_back({i, vec_pos(i, i, n), 1.0});
  for (const auto& pr : strict_pairs(n)) {
    l.push_back({pr.k0(), vec_pos(pr.row0(), pr.col0(), n), 1.0});
    u.push_back({pr.k0(), vec_pos(pr.col0(), pr.row0(), n), 1.0});
  }
  const Index s = skew_dim(n);
  return {{n, n * n, std::move(d)}, {s, n * n, std::move(l)}, {s, n * n, std::move(u)}};
}

OrthogonalTransform orthogonal_transform(Index n) {
  require_positive(n, "orthogonal_transform");
  const auto [sd, sl, su] = selection_matrices(n);
  const auto [h, f] = projectors(n);
  const double r2 = std::sqrt(2.0);
  SparseZeroOneMatrix v = SparseZeroOneMatrix::vstack(sd, r2 * sl) * h;
  SparseZeroOneMatrix u = (-r2 * su) * f;
  SparseZeroOneMatrix t = SparseZeroOneMatrix::vstack(v, u);
  return {std::move(t), std::move(v), std::move(u)};
}

ScaledCompressors scaled_compressors(Index n) {
  require_positive(n, "scaled_compressors");
  const auto [sd, sl, su] = selection_matrices(n);
  const auto [h, f] = projectors(n);
  return {SparseZeroOneMatrix::vstack(sd, 2.0 * sl) * h, (-2.0 * su) * f};
}

} // namespace mpencil
