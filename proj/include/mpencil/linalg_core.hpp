#pragma once

// Rank-revealing primitives, problem normalization and the symmetric
// rank-one (strong decomposability) factorization.

#include <optional>
#include <vector>

#include "mpencil/types.hpp"

namespace mpencil {

/// Singular values of M in decreasing order (empty for an empty matrix).
RealVector singular_values(const ComplexDenseMatrix& m);

/// Number of singular values above tol · σ_max. Zero when M = 0.
Index numerical_rank(const ComplexDenseMatrix& m, double tol);

/// Unitary compression exposing a full-rank leading block.
/// Row form:    transform · input = compressed = [R; 0], R with `rank` rows.
/// Column form: input · transform = compressed = [R, 0], R with `rank` columns.
struct CompressionResult {
  ComplexDenseMatrix transform;
  ComplexDenseMatrix compressed;
  Index rank = 0;
};

CompressionResult row_compression(const ComplexDenseMatrix& m, double tol);
CompressionResult column_compression(const ComplexDenseMatrix& m, double tol);

/// Orthonormal basis of the right null space (columns), possibly empty.
ComplexDenseMatrix nullspace(const ComplexDenseMatrix& m, double tol);

/// Null space using an absolute singular-value threshold.
ComplexDenseMatrix nullspace_abs(const ComplexDenseMatrix& m, double threshold);

/// The triple (A0, A1, A2) with shared shape m×n.
struct PencilProblem {
  ComplexDenseMatrix A0, A1, A2;
  bool normalized = false;

  Index m() const { return A0.rows(); }
  Index n() const { return A0.cols(); }
  const ComplexDenseMatrix& operator[](int i) const { return i == 0 ? A0 : (i == 1 ? A1 : A2); }

  /// λ0 A0 + λ1 A1 + λ2 A2.
  ComplexDenseMatrix pencil(const Triple& lambda) const {
    return lambda(0) * A0 + lambda(1) * A1 + lambda(2) * A2;
  }
};

/// Throws ShapeError unless the three matrices share a nonempty shape.
void check_same_shape(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1,
                      const ComplexDenseMatrix& a2);

/// Result of normalize_problem. Original eigenvectors are recovered as
/// x = right_map · x_reduced; the reduced matrices are left_map · A_i · right_map.
struct NormalizedProblem {
  PencilProblem problem;
  ComplexDenseMatrix left_map;   // m' × m
  ComplexDenseMatrix right_map;  // n × n'
  bool identity = true;
  /// Orthonormal basis of the common null space of A0, A1, A2 (removed columns).
  ComplexDenseMatrix common_null;
};

/// Enforce full column rank of [A0; A1; A2] and full row rank of [A0 A1 A2].
/// Exactly-zero common rows/columns are dropped as coordinates; any further
/// deficiency is removed with a unitary compression. Throws ShapeError when
/// the reduced problem has m' <= n'.
NormalizedProblem normalize_problem(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1,
                                    const ComplexDenseMatrix& a2, double tol);

/// x with x⊗x ≈ z when unvec(z) is (numerically) symmetric rank one, else nullopt.
/// The sign of x is fixed so that its largest-modulus entry has positive real part.
std::optional<ComplexVector> symmetric_rank_one_factor(const ComplexVector& z, double tol);

struct DecomposableMember {
  ComplexVector coefficients;  // combination of the basis columns, unit norm
  ComplexVector x;             // factor with x⊗x ≈ basis · coefficients
  double rank_one_defect = 0;  // σ2/σ1 of the symmetrized member
};

/// Search span(basis) for a strongly decomposable vector. Returns every distinct
/// rank-one member found (best first); empty on failure.
std::vector<DecomposableMember> decomposable_members(const ComplexDenseMatrix& basis, double tol,
                                                     std::uint64_t seed, int starts);

/// Best member of decomposable_members, if any.
std::optional<DecomposableMember> decomposable_in_span(const ComplexDenseMatrix& basis, double tol,
                                                       std::uint64_t seed = 1, int starts = 16);

/// Unit 2-norm, largest-modulus component real positive (ties: smallest index).
ComplexVector canonical_direction(const ComplexVector& v);

/// Spectral norm.
double norm2(const ComplexDenseMatrix& m);

} // namespace mpencil
