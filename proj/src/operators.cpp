#include "mpencil/operators.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "mpencil/gamma_kernels.hpp"
#include "mpencil/kron_structure.hpp"

namespace mpencil {

namespace {

void require_same(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + ": operands are " + shape_string(a.rows(), a.cols()) +
                     " and " + shape_string(b.rows(), b.cols()));
}

Index exact_sqrt(Index v, const char* what) {
  const Index r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v))));
  if (r * r != v || r < 1) throw ShapeError(std::string(what) + ": dimension is not a perfect square");
  return r;
}

ComplexDenseMatrix dense(const SparseZeroOneMatrix& s) { return s.to_dense().cast<Complex>(); }

} // namespace

ComplexDenseMatrix kron(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexDenseMatrix kron_commutator(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b) {
  require_same(a, b, "kron_commutator");
  return kron(a, b) - kron(b, a);
}

ComplexDenseMatrix kron_anticommutator(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b) {
  require_same(a, b, "kron_anticommutator");
  return kron(a, b) + kron(b, a);
}

std::array<ComplexDenseMatrix, 3> pencil_commutators(const PencilProblem& p) {
  check_same_shape(p.A0, p.A1, p.A2);
  return {kron_commutator(p.A1, p.A2), kron_commutator(p.A2, p.A0), kron_commutator(p.A0, p.A1)};
}

TransformedBlocks transform_blocks(const ComplexDenseMatrix& m) {
  const Index mm = exact_sqrt(m.rows(), "transform_blocks");
  const Index nn = exact_sqrt(m.cols(), "transform_blocks");
  const auto tm = orthogonal_transform(mm);
  const auto tn = orthogonal_transform(nn);
  const Eigen::SparseMatrix<Complex, Eigen::RowMajor> vm = tm.V.to_sparse().cast<Complex>();
  const Eigen::SparseMatrix<Complex, Eigen::RowMajor> um = tm.U.to_sparse().cast<Complex>();
  const ComplexDenseMatrix right_v = m * tn.V.transpose().to_sparse().cast<Complex>();
  const ComplexDenseMatrix right_u = m * tn.U.transpose().to_sparse().cast<Complex>();
  return {vm * right_v, vm * right_u, um * right_v, um * right_u};
}

AntiDiagonalBlocks block_antidiagonalize(const ComplexDenseMatrix& delta) {
  TransformedBlocks b = transform_blocks(delta);
  const double diag = std::sqrt(b.vv.squaredNorm() + b.uu.squaredNorm());
  return {std::move(b.vu), std::move(b.uv), diag};
}

DiagonalBlocks block_diagonalize_anti(const ComplexDenseMatrix& anti) {
  TransformedBlocks b = transform_blocks(anti);
  const double off = std::sqrt(b.vu.squaredNorm() + b.uv.squaredNorm());
  return {std::move(b.vv), std::move(b.uu), off};
}

const char* to_string(Scaling s) { return s == Scaling::integer ? "integer" : "orthogonal"; }

Scaling scaling_from_string(const std::string& s) {
  if (s == "integer") return Scaling::integer;
  if (s == "orthogonal") return Scaling::orthogonal;
  throw PreconditionError("unknown scaling '" + s + "' (expected integer or orthogonal)");
}

namespace {

// Integer → orthogonal: Γ_orth = Γ_int · diag(1, …, 1, 1/√2, …) / √2.
void to_orthogonal(ComplexDenseMatrix& g, Index n) {
  const double r = 1.0 / std::sqrt(2.0);
  g *= r;
  g.rightCols(skew_dim(n)) *= r;
}

} // namespace

DeterminantTriple kronecker_determinants(const PencilProblem& p, Scaling scaling) {
  check_same_shape(p.A0, p.A1, p.A2);
  const bool big = skew_dim(p.m()) >= kernels::parallel_row_threshold;
  auto assemble = [&](const ComplexDenseMatrix& aj, const ComplexDenseMatrix& ak) {
    return big ? kernels::gamma_parallel(aj, ak) : kernels::gamma_serial(aj, ak);
  };
  DeterminantTriple t{{assemble(p.A1, p.A2), assemble(p.A2, p.A0), assemble(p.A0, p.A1)}, scaling};
  if (scaling == Scaling::orthogonal)
    for (auto& g : t.gamma) to_orthogonal(g, p.n());
  return t;
}

DeterminantTriple kronecker_determinants_dense(const PencilProblem& p, Scaling scaling) {
  const auto deltas = pencil_commutators(p);
  ComplexDenseMatrix left, right;
  if (scaling == Scaling::integer) {
    const auto cm = scaled_compressors(p.m());
    const auto cn = scaled_compressors(p.n());
    left = dense(cm.U);
    right = dense(cn.V).transpose();
  } else {
    left = dense(orthogonal_transform(p.m()).U);
    right = dense(orthogonal_transform(p.n()).V).transpose();
  }
  DeterminantTriple t;
  t.scaling = scaling;
  for (int i = 0; i < 3; ++i) t.gamma[static_cast<std::size_t>(i)] = left * deltas[static_cast<std::size_t>(i)] * right;
  return t;
}

} // namespace mpencil
