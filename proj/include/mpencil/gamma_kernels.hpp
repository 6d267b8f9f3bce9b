#pragma once

// Compressed assembly of the integer-scaled Kronecker determinant
//   Γ = 2 Û (Aj ⊗ Ak) V̂ᵀ
// without forming the m²×n² Kronecker product. Row r of Γ belongs to the
// strictly lower pair (a, b) of the m×m index square, column c to a diagonal
// entry d or a strictly lower pair (c, d) of the n×n square.
//
// The serial kernel is the reference; the OpenMP kernel splits output rows
// across threads with the same per-entry summation order, so both produce
// bit-identical matrices.

#include "mpencil/types.hpp"

namespace mpencil::kernels {

ComplexDenseMatrix gamma_serial(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak);

ComplexDenseMatrix gamma_parallel(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak);

/// Rows of Γ at or above this count go through the OpenMP kernel.
inline constexpr Index parallel_row_threshold = 64;

} // namespace mpencil::kernels
