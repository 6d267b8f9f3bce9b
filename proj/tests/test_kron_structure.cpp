#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mpencil/kron_structure.hpp"
#include "test_support.hpp"

using namespace mpencil;
using Dense = Eigen::MatrixXd;

namespace {

Dense identity(Index n) { return Dense::Identity(n, n); }

template <typename D>
double max_abs(const Eigen::MatrixBase<D>& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// Row labels "ij" → 1-based (i, j); column of entry (i, j) in vec(Z).
Index vec_col(int label, Index n) { return (label % 10 - 1) * n + (label / 10 - 1); }

Dense selection_from_labels(std::initializer_list<int> labels, Index n) {
  Dense s = Dense::Zero(static_cast<Index>(labels.size()), n * n);
  Index r = 0;
  for (int l : labels) s(r++, vec_col(l, n)) = 1.0;
  return s;
}

} // namespace

TEST_CASE("vec stacks columns and unvec inverts it") {
  const ComplexDenseMatrix z = fixtures::mat(2, 2, {1, 3, 2, 4});
  CHECK(vec(z) == fixtures::cvec({1, 2, 3, 4}));
  CHECK(vec(ComplexDenseMatrix::Identity(2, 2)) == fixtures::cvec({1, 0, 0, 1}));

  ComplexDenseMatrix labels(3, 3);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) labels(i - 1, j - 1) = 10 * i + j;
  CHECK(vec(labels) == fixtures::cvec({11, 21, 31, 12, 22, 32, 13, 23, 33}));

  RandomStream rs(7, 0);
  const ComplexDenseMatrix r = rs.complex_matrix(4, 4);
  CHECK(unvec(vec(r), 4) == r);
  CHECK_THROWS_AS(vec(ComplexDenseMatrix::Zero(2, 3)), ShapeError);
  CHECK_THROWS_AS(unvec(ComplexVector::Zero(5), 2), ShapeError);
}

TEST_CASE("commutation matrix small cases") {
  CHECK(commutation_matrix(1).to_dense() == identity(1));
  const ComplexVector v = commutation_matrix(2).apply(fixtures::cvec({1, 3, 2, 4}));
  CHECK(v == fixtures::cvec({1, 2, 3, 4}));
  CHECK_THROWS_AS(commutation_matrix(0), PreconditionError);
  CHECK_THROWS_AS(projectors(0), PreconditionError);
  CHECK_THROWS_AS(selection_matrices(0), PreconditionError);
  CHECK_THROWS_AS(orthogonal_transform(0), PreconditionError);
  CHECK_THROWS_AS(scaled_compressors(0), PreconditionError);
}

TEST_CASE("K3, H3, F3 match the displayed matrices entry for entry") {
  Dense k(9, 9);
  k << 1, 0, 0, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 1, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 1, 0, 0,
       0, 1, 0, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 1, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 0, 1, 0,
       0, 0, 1, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 1, 0, 0, 0,
       0, 0, 0, 0, 0, 0, 0, 0, 1;
  const double h = 0.5;
  Dense hm(9, 9);
  hm << 1, 0, 0, 0, 0, 0, 0, 0, 0,
        0, h, 0, h, 0, 0, 0, 0, 0,
        0, 0, h, 0, 0, 0, h, 0, 0,
        0, h, 0, h, 0, 0, 0, 0, 0,
        0, 0, 0, 0, 1, 0, 0, 0, 0,
        0, 0, 0, 0, 0, h, 0, h, 0,
        0, 0, h, 0, 0, 0, h, 0, 0,
        0, 0, 0, 0, 0, h, 0, h, 0,
        0, 0, 0, 0, 0, 0, 0, 0, 1;
  Dense fm(9, 9);
  fm << 0, 0, 0, 0, 0, 0, 0, 0, 0,
        0, h, 0, -h, 0, 0, 0, 0, 0,
        0, 0, h, 0, 0, 0, -h, 0, 0,
        0, -h, 0, h, 0, 0, 0, 0, 0,
        0, 0, 0, 0, 0, 0, 0, 0, 0,
        0, 0, 0, 0, 0, h, 0, -h, 0,
        0, 0, -h, 0, 0, 0, h, 0, 0,
        0, 0, 0, 0, 0, -h, 0, h, 0,
        0, 0, 0, 0, 0, 0, 0, 0, 0;
  CHECK(commutation_matrix(3).to_dense() == k);
  const Projectors p = projectors(3);
  CHECK(p.sym.to_dense() == hm);
  CHECK(p.skew.to_dense() == fm);
  CHECK(commutation_matrix(3).is_row_selection());
}

TEST_CASE("projectors n=1 and F annihilates symmetric input") {
  const Projectors p1 = projectors(1);
  CHECK(p1.sym.to_dense() == identity(1));
  CHECK(p1.skew.to_dense() == Dense::Zero(1, 1));
  CHECK(projectors(2).skew.apply(vec(fixtures::mat(2, 2, {1, 2, 2, 5}))).isZero(0));
}

TEST_CASE("n=4 selection stack matches the display") {
  const Dense expected = selection_from_labels(
      {11, 22, 33, 44, 21, 31, 41, 32, 42, 43, 12, 13, 14, 23, 24, 34}, 4);
  // The displayed rows, written out as column positions of the single 1.
  const int cols[16] = {1, 6, 11, 16, 2, 3, 4, 7, 8, 12, 5, 9, 13, 10, 14, 15};
  for (int r = 0; r < 16; ++r) CHECK(expected(r, cols[r] - 1) == 1.0);

  const SelectionMatrices s = selection_matrices(4);
  Dense stack(16, 16);
  stack << s.diag.to_dense(), s.lower.to_dense(), s.upper.to_dense();
  CHECK(stack == expected);
  CHECK(s.diag.is_row_selection());
  CHECK(s.lower.is_row_selection());
  CHECK(s.upper.is_row_selection());
}

TEST_CASE("selection matrices n=1, n=2") {
  const SelectionMatrices s1 = selection_matrices(1);
  CHECK(s1.diag.to_dense() == identity(1));
  CHECK(s1.lower.rows() == 0);
  CHECK(s1.upper.rows() == 0);

  const SelectionMatrices s2 = selection_matrices(2);
  CHECK(s2.diag.to_dense() == selection_from_labels({11, 22}, 2));
  CHECK(s2.lower.to_dense() == selection_from_labels({21}, 2));
  CHECK(s2.upper.to_dense() == selection_from_labels({12}, 2));
}

TEST_CASE("strict pair index is a bijection onto 1..n(n-1)/2") {
  for (Index n = 2; n <= 7; ++n) {
    std::set<Index> seen;
    for (Index j = 1; j < n; ++j)
      for (Index i = j + 1; i <= n; ++i) {
        const StrictPairIndex p(i, j, n);
        CHECK(p.k() == (j - 1) * n + i - j * (j + 1) / 2);
        CHECK(p.k() >= 1);
        CHECK(p.k() <= skew_dim(n));
        seen.insert(p.k());
        const StrictPairIndex back = StrictPairIndex::from_linear(p.k(), n);
        CHECK(back.i() == i);
        CHECK(back.j() == j);
      }
    CHECK(static_cast<Index>(seen.size()) == skew_dim(n));
    const auto pairs = strict_pairs(n);
    for (std::size_t k = 0; k < pairs.size(); ++k) CHECK(pairs[k].k0() == static_cast<Index>(k));
  }
  CHECK_THROWS_AS(StrictPairIndex(1, 1, 3), PreconditionError);
  CHECK_THROWS_AS(StrictPairIndex(4, 1, 3), PreconditionError);
  CHECK_THROWS_AS(StrictPairIndex(1, 2, 3), PreconditionError);
}

TEST_CASE("orthogonal transform small cases") {
  CHECK(orthogonal_transform(1).T.to_dense() == identity(1));
  const OrthogonalTransform t2 = orthogonal_transform(2);
  const ComplexVector xx = fixtures::cvec({1, 2, 2, 4});
  const ComplexVector v = t2.V.apply(xx);
  CHECK(std::abs(v(0) - 1.0) < 1e-15);
  CHECK(std::abs(v(1) - 4.0) < 1e-15);
  CHECK(std::abs(v(2) - 2.0 * std::sqrt(2.0)) < 1e-15);
  CHECK(t2.U.apply(xx).isZero(0));
  const Dense t3 = orthogonal_transform(3).T.to_dense();
  CHECK(max_abs(t3 * t3.transpose() - identity(9)) <= 4 * 2.3e-16);
}

TEST_CASE("scaled compressors small cases") {
  const ScaledCompressors c1 = scaled_compressors(1);
  CHECK(c1.V.to_dense() == identity(1));
  CHECK(c1.U.rows() == 0);

  const ScaledCompressors c2 = scaled_compressors(2);
  const ComplexVector z = fixtures::cvec({3, 5, 7, 11});
  CHECK(c2.V.apply(z) == fixtures::cvec({3, 11, 12}));
  CHECK(c2.U.apply(z) == fixtures::cvec({-2}));  // z2 − z3
}

TEST_CASE("structure identities hold for n <= 6") {
  for (Index n = 1; n <= 6; ++n) {
    CAPTURE(n);
    const Index n2 = n * n;
    const SparseZeroOneMatrix k = commutation_matrix(n);
    const Projectors pr = projectors(n);
    const SelectionMatrices s = selection_matrices(n);
    const OrthogonalTransform t = orthogonal_transform(n);
    const ScaledCompressors c = scaled_compressors(n);
    const Dense K = k.to_dense(), H = pr.sym.to_dense(), F = pr.skew.to_dense();
    const Dense SD = s.diag.to_dense(), SL = s.lower.to_dense(), SU = s.upper.to_dense();
    const Dense I = identity(n2);

    RandomStream rs(100 + static_cast<std::uint64_t>(n), 0);
    const ComplexDenseMatrix z = rs.complex_matrix(n, n);
    const ComplexVector vz = vec(z);

    // P.1 symmetry
    CHECK(K == K.transpose());
    CHECK(H == H.transpose());
    CHECK(F == F.transpose());
    // P.2 products
    CHECK(K * K == I);
    CHECK(H * K == H);
    CHECK(K * H == H);
    CHECK(F * K == -F);
    CHECK(K * F == -F);
    CHECK(H * H == H);
    CHECK(F * F == F);
    CHECK((H * F).isZero(0));
    CHECK((F * H).isZero(0));
    // sparse products agree with the dense ones
    CHECK((k * k).to_dense() == I);
    // P.3
    CHECK(H + F == I);
    CHECK(H * H + F * F == I);
    // P.4 action on vec(Z)
    CHECK(k.apply(vz) == vec(z.transpose()));
    CHECK((H.cast<Complex>() * vz - vec((z + z.transpose()) / 2.0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((F.cast<Complex>() * vz - vec((z - z.transpose()) / 2.0)).cwiseAbs().maxCoeff() == 0.0);

    // P.8 d(Z), l(Z), u(Z)
    const ComplexVector d = s.diag.apply(vz), l = s.lower.apply(vz), u = s.upper.apply(vz);
    for (Index i = 0; i < n; ++i) CHECK(d(i) == z(i, i));
    for (const auto& p : strict_pairs(n)) {
      CHECK(l(p.k0()) == z(p.row0(), p.col0()));
      CHECK(u(p.k0()) == z(p.col0(), p.row0()));
    }
    // P.9 permutation
    Dense P(n2, n2);
    P << SD, SL, SU;
    CHECK(P.transpose() * P == I);
    CHECK(P * P.transpose() == I);
    CHECK((P.array() != 0).rowwise().count().maxCoeff() == 1);
    CHECK((P.array() != 0).colwise().count().minCoeff() == 1);
    // P.10 diagonal masks
    Dense ID = Dense::Zero(n2, n2), IL = Dense::Zero(n2, n2), IU = Dense::Zero(n2, n2);
    for (Index col = 0; col < n; ++col)
      for (Index row = 0; row < n; ++row) {
        const Index at = col * n + row;
        (row == col ? ID : (row > col ? IL : IU))(at, at) = 1.0;
      }
    CHECK(SD.transpose() * SD == ID);
    CHECK(SL.transpose() * SL == IL);
    CHECK(SU.transpose() * SU == IU);
    // P.11
    CHECK(SD * K == SD);
    CHECK(SL * K == SU);
    CHECK(SU * K == SL);
    // P.12
    CHECK(K == SD.transpose() * SD + SL.transpose() * SU + SU.transpose() * SL);
    // P.13
    CHECK(SD * H == SD);
    CHECK((SD * F).isZero(0));
    // P.14
    CHECK(SL * H == 0.5 * (SL + SU));
    CHECK(SL * F == 0.5 * (SL - SU));
    CHECK(SU * H == 0.5 * (SL + SU));
    CHECK(-SU * F == 0.5 * (SL - SU));
    // P.15 within 1e-12 (√2 enters)
    const double r2 = std::sqrt(2.0);
    Dense top(sym_dim(n), n2);
    top << SD, r2 * SL;
    const Dense V = t.V.to_dense(), U = t.U.to_dense(), T = t.T.to_dense();
    CHECK(max_abs(V - top * H) <= 1e-12);
    CHECK(max_abs(U - (-r2 * SU * F)) <= 1e-12);
    Dense tv(n2, n2);
    tv << SD, (SL + SU) / r2, (SL - SU) / r2;
    CHECK(max_abs(T - tv) <= 1e-12);
    // P.16 to a few ulps
    CHECK(max_abs(T * T.transpose() - I) <= 4 * 2.3e-16);
    CHECK(max_abs(T.transpose() * T - I) <= 4 * 2.3e-16);
    // symmetric input: U z = 0 and VᵀV z = z
    const ComplexVector zs = vec(z + z.transpose());
    CHECK(max_abs(t.U.apply(zs)) <= 1e-12);
    CHECK((t.V.transpose().apply(t.V.apply(zs)) - zs).cwiseAbs().maxCoeff() <= 1e-12 * zs.norm());

    // integer compressors: V̂ = [S_D; 2 S_L] H, Û = −2 S_U F, same supports, row rescalings of V, U
    Dense vtop(sym_dim(n), n2);
    vtop << SD, 2 * SL;
    const Dense VH = c.V.to_dense(), UH = c.U.to_dense();
    CHECK(VH == vtop * H);
    CHECK(UH == -2 * SU * F);
    CHECK(((VH.array() != 0) == (V.array() != 0)).all());
    CHECK(((UH.array() != 0) == (U.array() != 0)).all());
    CHECK(max_abs(VH) <= 1.0);
    for (Index r = 0; r < VH.rows(); ++r) {
      const double ratio = VH.row(r).norm() / V.row(r).norm();
      CHECK(max_abs(VH.row(r) - ratio * V.row(r)) <= 1e-12);
    }
    for (Index r = 0; r < UH.rows(); ++r) {
      const double ratio = UH.row(r).norm() / U.row(r).norm();
      CHECK(ratio > 0);
      CHECK(max_abs(UH.row(r) - ratio * U.row(r)) <= 1e-12);
    }
  }
}

TEST_CASE("sparse matrix invariants") {
  CHECK_THROWS_AS(SparseZeroOneMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 1.0}}), PreconditionError);
  CHECK_THROWS_AS(SparseZeroOneMatrix(2, 2, {{0, 0, 0.0}}), PreconditionError);
  CHECK_THROWS_AS(SparseZeroOneMatrix(2, 2, {{2, 0, 1.0}}), PreconditionError);
  const SparseZeroOneMatrix a(2, 3, {{1, 2, 1.0}, {0, 0, 1.0}});
  CHECK(a.entries().front().row == 0);
  CHECK(a.transpose().transpose() == a);
  CHECK(a.is_row_selection());
  CHECK(!(2.0 * a).is_row_selection());
}
