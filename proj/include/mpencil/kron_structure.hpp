#pragma once

// Commutation, projection, selection and orthogonal transform matrices
// acting on vec(Z) for square Z, plus vec/unvec.
//
// Indices are 0-based everywhere in code. StrictPairIndex is the only place
// that speaks the 1-based (i, j, k) labelling used in documentation.

#include <vector>

#include <Eigen/SparseCore>

#include "mpencil/types.hpp"

namespace mpencil {

struct SparseEntry {
  Index row = 0;
  Index col = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Immutable sparse matrix with real entries drawn from a small set
/// ({0, ±1, ±1/2, ±√2/2, ±2, ...}). Entries are kept sorted row-major.
class SparseZeroOneMatrix {
public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SparseZeroOneMatrix() = default;

  /// Throws PreconditionError on duplicate (row, col), zero values or
  /// out-of-range indices.
  SparseZeroOneMatrix(Index rows, Index cols, std::vector<SparseEntry> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<SparseEntry>& entries() const { return entries_; }
  Index nonzeros() const { return static_cast<Index>(entries_.size()); }

  /// True when every stored value is 1 and each row holds exactly one entry.
  bool is_row_selection() const;

  Storage to_sparse() const;
  Eigen::MatrixXd to_dense() const;
  SparseZeroOneMatrix transpose() const;

  ComplexVector apply(const ComplexVector& v) const;

  /// Exact products of sparse structure matrices (entries are summed, zeros dropped).
  friend SparseZeroOneMatrix operator*(const SparseZeroOneMatrix& a,
                                       const SparseZeroOneMatrix& b);
  friend SparseZeroOneMatrix operator+(const SparseZeroOneMatrix& a,
                                       const SparseZeroOneMatrix& b);
  friend SparseZeroOneMatrix operator*(double s, const SparseZeroOneMatrix& a);
  friend bool operator==(const SparseZeroOneMatrix& a, const SparseZeroOneMatrix& b);

  static SparseZeroOneMatrix identity(Index n);
  static SparseZeroOneMatrix from_storage(const Storage& s);
  /// Rows of `top` followed by rows of `bottom`.
  static SparseZeroOneMatrix vstack(const SparseZeroOneMatrix& top,
                                    const SparseZeroOneMatrix& bottom);

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<SparseEntry> entries_;
};

/// Strictly lower pair (i, j), j < i, of an n×n matrix and its linear index
/// k = (j−1)n + i − j(j+1)/2, all 1-based.
class StrictPairIndex {
public:
  /// Throws PreconditionError unless 1 <= j < i <= n.
  StrictPairIndex(Index i, Index j, Index n);

  Index i() const { return i_; }
  Index j() const { return j_; }
  Index k() const { return k_; }

  // 0-based views for internal use.
  Index row0() const { return i_ - 1; }
  Index col0() const { return j_ - 1; }
  Index k0() const { return k_ - 1; }

  /// Inverse of k(): the pair with the given 1-based linear index.
  static StrictPairIndex from_linear(Index k, Index n);

private:
  Index i_, j_, k_;
};

/// All strictly lower pairs of an n×n matrix, in k order.
std::vector<StrictPairIndex> strict_pairs(Index n);

inline Index sym_dim(Index n) { return n * (n + 1) / 2; }
inline Index skew_dim(Index n) { return n * (n - 1) / 2; }

/// Column-major stacking of a square matrix.
ComplexVector vec(const ComplexDenseMatrix& z);
ComplexDenseMatrix unvec(const ComplexVector& z, Index n);

/// K·vec(Z) = vec(Zᵀ).
SparseZeroOneMatrix commutation_matrix(Index n);

struct Projectors {
  SparseZeroOneMatrix sym;   // H = (I + K)/2
  SparseZeroOneMatrix skew;  // F = (I − K)/2
};
Projectors projectors(Index n);

struct SelectionMatrices {
  SparseZeroOneMatrix diag;   // n × n²
  SparseZeroOneMatrix lower;  // n(n−1)/2 × n²
  SparseZeroOneMatrix upper;  // n(n−1)/2 × n²
};
SelectionMatrices selection_matrices(Index n);

/// T = [V; U], orthogonal, with V = [S_D; √2 S_L] H and U = −√2 S_U F.
struct OrthogonalTransform {
  SparseZeroOneMatrix T;
  SparseZeroOneMatrix V;
  SparseZeroOneMatrix U;
};
OrthogonalTransform orthogonal_transform(Index n);

/// Integer compressors V̂ = [S_D; 2 S_L] H (entries 0/1) and Û = −2 S_U F
/// (entries 0/±1). Row-rescalings of V and U.
struct ScaledCompressors {
  SparseZeroOneMatrix V;
  SparseZeroOneMatrix U;
};
ScaledCompressors scaled_compressors(Index n);

} // namespace mpencil
