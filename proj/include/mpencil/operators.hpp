#pragma once

// Kronecker commutators Δ = A⊗B − B⊗A, anti-commutators, the pencil
// commutators Δ0, Δ1, Δ2, their block forms under T, and the Kronecker
// determinants Γ0, Γ1, Γ2.

#include <array>

#include "mpencil/linalg_core.hpp"
#include "mpencil/types.hpp"

namespace mpencil {

ComplexDenseMatrix kron(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b);

/// A⊗B − B⊗A. Throws ShapeError on mismatched shapes.
ComplexDenseMatrix kron_commutator(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b);

/// A⊗B + B⊗A.
ComplexDenseMatrix kron_anticommutator(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b);

/// Δ0 = A1⊗A2 − A2⊗A1, Δ1 = A2⊗A0 − A0⊗A2, Δ2 = A0⊗A1 − A1⊗A0.
std::array<ComplexDenseMatrix, 3> pencil_commutators(const PencilProblem& p);

/// The four blocks of Tᵐ · M · (Tⁿ)ᵀ, split as [V-rows | U-rows] × [V-cols | U-cols].
struct TransformedBlocks {
  ComplexDenseMatrix vv;  // m(m+1)/2 × n(n+1)/2
  ComplexDenseMatrix vu;  // m(m+1)/2 × n(n−1)/2
  ComplexDenseMatrix uv;  // m(m−1)/2 × n(n+1)/2
  ComplexDenseMatrix uu;  // m(m−1)/2 × n(n−1)/2
};

/// Tᵐ M (Tⁿ)ᵀ for an m²×n² matrix. Throws ShapeError if the dimensions are not squares.
TransformedBlocks transform_blocks(const ComplexDenseMatrix& m);

/// Off-diagonal blocks of the anti-diagonalized commutator, with the size of what
/// should vanish.
struct AntiDiagonalBlocks {
  ComplexDenseMatrix delta12;  // m(m+1)/2 × n(n−1)/2
  ComplexDenseMatrix delta21;  // m(m−1)/2 × n(n+1)/2
  double diagonal_norm = 0;    // Frobenius norm of the vanishing diagonal blocks
};
AntiDiagonalBlocks block_antidiagonalize(const ComplexDenseMatrix& delta);

struct DiagonalBlocks {
  ComplexDenseMatrix anti11;  // m(m+1)/2 × n(n+1)/2
  ComplexDenseMatrix anti22;  // m(m−1)/2 × n(n−1)/2
  double offdiagonal_norm = 0;
};
DiagonalBlocks block_diagonalize_anti(const ComplexDenseMatrix& anti);

enum class Scaling { integer, orthogonal };

const char* to_string(Scaling s);
Scaling scaling_from_string(const std::string& s);

/// Γ0, Γ1, Γ2, each m(m−1)/2 × n(n+1)/2.
struct DeterminantTriple {
  std::array<ComplexDenseMatrix, 3> gamma;
  Scaling scaling = Scaling::integer;

  const ComplexDenseMatrix& operator[](int i) const { return gamma[static_cast<std::size_t>(i)]; }
  Index rows() const { return gamma[0].rows(); }
  Index cols() const { return gamma[0].cols(); }
};

/// Γ_i = Û Δ_i V̂ᵀ (integer) or U Δ_i Vᵀ (orthogonal), by compressed assembly.
DeterminantTriple kronecker_determinants(const PencilProblem& p, Scaling scaling = Scaling::integer);

/// Γ_i through the explicit m²×n² commutators and the sparse compressors.
DeterminantTriple kronecker_determinants_dense(const PencilProblem& p, Scaling scaling = Scaling::integer);

} // namespace mpencil
