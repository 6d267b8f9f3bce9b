#include "mpencil/gamma_kernels.hpp"

#include <vector>

#include "mpencil/kron_structure.hpp"

namespace mpencil::kernels {

namespace {

struct Layout {
  std::vector<StrictPairIndex> row_pairs;  // pairs of the m×m square
  std::vector<StrictPairIndex> col_pairs;  // pairs of the n×n square
  Index n = 0;
};

Layout make_layout(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak) {
  if (aj.rows() != ak.rows() || aj.cols() != ak.cols())
    throw ShapeError("gamma kernel: operand shapes differ");
  return {strict_pairs(aj.rows()), strict_pairs(aj.cols()), aj.cols()};
}

// One row of Γ. Û row (a, b), a > b, is e_(a,b) − e_(b,a); V̂ row for a
// diagonal d is e_(d,d), for a pair (c, d), c > d, it is e_(c,d) + e_(d,c).
// (Aj ⊗ Ak) at vec positions ((r1,r2), (c1,c2)) is Aj(r1,c1)·Ak(r2,c2), and
// vec position of Z(i, j) maps to Kronecker index pair (j, i).
inline void gamma_row(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak,
                      const StrictPairIndex& rp, const Layout& layout, ComplexDenseMatrix& out,
                      Index r) {
  const Index a = rp.row0(), b = rp.col0();
  const Index n = layout.n;
  for (Index d = 0; d < n; ++d) {
    const Complex v = aj(b, d) * ak(a, d) - aj(a, d) * ak(b, d);
    out(r, d) = 2.0 * v;
  }
  for (const auto& cp : layout.col_pairs) {
    const Index c = cp.row0(), d = cp.col0();
    const Complex v = aj(b, d) * ak(a, c) + aj(b, c) * ak(a, d) - aj(a, d) * ak(b, c) -
                      aj(a, c) * ak(b, d);
    out(r, n + cp.k0()) = 2.0 * v;
  }
}

} // namespace

ComplexDenseMatrix gamma_serial(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak) {
  const Layout layout = make_layout(aj, ak);
  ComplexDenseMatrix out(skew_dim(aj.rows()), sym_dim(aj.cols()));
  for (std::size_t r = 0; r < layout.row_pairs.size(); ++r)
    gamma_row(aj, ak, layout.row_pairs[r], layout, out, static_cast<Index>(r));
  return out;
}

ComplexDenseMatrix gamma_parallel(const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak) {
  const Layout layout = make_layout(aj, ak);
  ComplexDenseMatrix out(skew_dim(aj.rows()), sym_dim(aj.cols()));
  const Index rows = static_cast<Index>(layout.row_pairs.size());
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows; ++r)
    gamma_row(aj, ak, layout.row_pairs[static_cast<std::size_t>(r)], layout, out, r);
  return out;
}

} // namespace mpencil::kernels
