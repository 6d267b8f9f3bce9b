#include "mpencil/linalg_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "mpencil/kron_structure.hpp"
#include "mpencil/random.hpp"

namespace mpencil {

namespace {

struct FullSvd {
  ComplexDenseMatrix U;
  RealVector S;
  ComplexDenseMatrix V;
};

FullSvd full_svd(const ComplexDenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    return {ComplexDenseMatrix::Identity(m.rows(), m.rows()), RealVector(0),
            ComplexDenseMatrix::Identity(m.cols(), m.cols())};
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Index count_above(const RealVector& s, double threshold) {
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

void require_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw PreconditionError("tolerance must lie in (0, 1)");
}

} // namespace

RealVector singular_values(const ComplexDenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  return Eigen::JacobiSVD<ComplexDenseMatrix>(m).singularValues();
}

double norm2(const ComplexDenseMatrix& m) {
  const RealVector s = singular_values(m);
  return s.size() ? s(0) : 0.0;
}

Index numerical_rank(const ComplexDenseMatrix& m, double tol) {
  require_tol(tol);
  const RealVector s = singular_values(m);
  if (s.size() == 0 || !(s(0) > std::numeric_limits<double>::min())) return 0;
  return count_above(s, tol * s(0));
}

CompressionResult row_compression(const ComplexDenseMatrix& m, double tol) {
  require_tol(tol);
  FullSvd f = full_svd(m);
  const Index r = f.S.size() ? count_above(f.S, tol * f.S(0)) : 0;
  ComplexDenseMatrix w = f.U.adjoint();
  ComplexDenseMatrix c = w * m;
  c.bottomRows(m.rows() - r).setZero();
  return {std::move(w), std::move(c), r};
}

CompressionResult column_compression(const ComplexDenseMatrix& m, double tol) {
  require_tol(tol);
  FullSvd f = full_svd(m);
  const Index r = f.S.size() ? count_above(f.S, tol * f.S(0)) : 0;
  ComplexDenseMatrix c = m * f.V;
  c.rightCols(m.cols() - r).setZero();
  return {std::move(f.V), std::move(c), r};
}

ComplexDenseMatrix nullspace_abs(const ComplexDenseMatrix& m, double threshold) {
  FullSvd f = full_svd(m);
  const Index r = count_above(f.S, threshold);
  return f.V.rightCols(m.cols() - r);
}

ComplexDenseMatrix nullspace(const ComplexDenseMatrix& m, double tol) {
  require_tol(tol);
  FullSvd f = full_svd(m);
  if (f.S.size() == 0 || f.S(0) == 0.0) return ComplexDenseMatrix::Identity(m.cols(), m.cols());
  const Index r = count_above(f.S, tol * f.S(0));
  return f.V.rightCols(m.cols() - r);
}

void check_same_shape(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1,
                      const ComplexDenseMatrix& a2) {
  if (a0.rows() != a1.rows() || a0.rows() != a2.rows() || a0.cols() != a1.cols() ||
      a0.cols() != a2.cols())
    throw ShapeError("A0, A1, A2 must share one shape; got " + shape_string(a0.rows(), a0.cols()) +
                     ", " + shape_string(a1.rows(), a1.cols()) + ", " +
                     shape_string(a2.rows(), a2.cols()));
  if (a0.rows() == 0 || a0.cols() == 0) throw ShapeError("empty pencil matrices");
}

NormalizedProblem normalize_problem(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1,
                                    const ComplexDenseMatrix& a2, double tol) {
  check_same_shape(a0, a1, a2);
  const Index m = a0.rows(), n = a0.cols();

  // Exactly-zero common columns and rows are dropped as coordinates.
  std::vector<Index> keep_cols, keep_rows;
  for (Index j = 0; j < n; ++j)
    if (!(a0.col(j).isZero(0) && a1.col(j).isZero(0) && a2.col(j).isZero(0))) keep_cols.push_back(j);
  for (Index i = 0; i < m; ++i)
    if (!(a0.row(i).isZero(0) && a1.row(i).isZero(0) && a2.row(i).isZero(0))) keep_rows.push_back(i);
  if (keep_cols.empty() || keep_rows.empty()) throw ShapeError("pencil matrices are all zero");

  ComplexDenseMatrix right = ComplexDenseMatrix::Zero(n, static_cast<Index>(keep_cols.size()));
  for (std::size_t c = 0; c < keep_cols.size(); ++c) right(keep_cols[c], static_cast<Index>(c)) = 1.0;
  ComplexDenseMatrix left = ComplexDenseMatrix::Zero(static_cast<Index>(keep_rows.size()), m);
  for (std::size_t r = 0; r < keep_rows.size(); ++r) left(static_cast<Index>(r), keep_rows[r]) = 1.0;

  auto reduce = [&](const ComplexDenseMatrix& a) -> ComplexDenseMatrix { return left * a * right; };
  ComplexDenseMatrix b0 = reduce(a0), b1 = reduce(a1), b2 = reduce(a2);

  const Index nc = b0.cols(), mr = b0.rows();
  ComplexDenseMatrix stacked(3 * mr, nc);
  stacked << b0, b1, b2;
  CompressionResult cc = column_compression(stacked, tol);
  if (cc.rank < nc) {
    const ComplexDenseMatrix keep = cc.transform.leftCols(cc.rank);
    right = right * keep;
    b0 = b0 * keep;
    b1 = b1 * keep;
    b2 = b2 * keep;
  }
  ComplexDenseMatrix side(b0.rows(), 3 * b0.cols());
  side << b0, b1, b2;
  CompressionResult rc = row_compression(side, tol);
  if (rc.rank < b0.rows()) {
    const ComplexDenseMatrix keep = rc.transform.topRows(rc.rank);
    left = keep * left;
    b0 = keep * b0;
    b1 = keep * b1;
    b2 = keep * b2;
  }

  NormalizedProblem out;
  out.identity = (b0.rows() == m && b0.cols() == n);
  if (out.identity) {
    // Keep the caller's entries bit-for-bit (integer inputs stay integer).
    out.problem = {a0, a1, a2, true};
    out.left_map = ComplexDenseMatrix::Identity(m, m);
    out.right_map = ComplexDenseMatrix::Identity(n, n);
  } else {
    out.problem = {std::move(b0), std::move(b1), std::move(b2), true};
    out.left_map = std::move(left);
    out.right_map = std::move(right);
  }
  ComplexDenseMatrix full_stack(3 * m, n);
  full_stack << a0, a1, a2;
  out.common_null = nullspace(full_stack, tol);

  if (out.problem.m() <= out.problem.n())
    throw ShapeError("after normalization the pencil is " +
                     shape_string(out.problem.m(), out.problem.n()) + "; need m > n");
  return out;
}

ComplexVector canonical_direction(const ComplexVector& v) {
  const double nrm = v.norm();
  if (nrm == 0.0) return v;
  ComplexVector u = v / nrm;
  double best = 0.0;
  for (Index i = 0; i < u.size(); ++i) best = std::max(best, std::abs(u(i)));
  Index pick = 0;
  for (Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) >= best * (1.0 - 1e-10)) {
      pick = i;
      break;
    }
  }
  const Complex phase = u(pick) / std::abs(u(pick));
  return u * std::conj(phase);
}

namespace {

// Best symmetric rank-one approximation x xᵀ of the symmetric part of Z.
struct RankOneFit {
  ComplexVector x;
  double defect = 1.0;  // σ2/σ1 of the symmetrized matrix
};

RankOneFit rank_one_fit(const ComplexDenseMatrix& z) {
  const ComplexDenseMatrix zs = 0.5 * (z + z.transpose());
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(zs, Eigen::ComputeFullU);
  const RealVector s = svd.singularValues();
  RankOneFit fit;
  if (s.size() == 0 || s(0) == 0.0) {
    fit.x = ComplexVector::Zero(z.rows());
    return fit;
  }
  const ComplexVector u = svd.matrixU().col(0);
  const Complex c2 = (u.adjoint() * zs * u.conjugate())(0, 0);
  ComplexVector x = std::sqrt(c2) * u;
  // Fix the ± ambiguity: largest-modulus entry gets positive real part.
  Index pick = 0;
  for (Index i = 1; i < x.size(); ++i)
    if (std::abs(x(i)) > std::abs(x(pick)) * (1.0 + 1e-10)) pick = i;
  if (x(pick).real() < 0.0 || (x(pick).real() == 0.0 && x(pick).imag() < 0.0)) x = -x;
  fit.x = std::move(x);
  fit.defect = s.size() > 1 ? s(1) / s(0) : 0.0;
  return fit;
}

double outer_error(const ComplexVector& x, const ComplexDenseMatrix& z) {
  const double zn = z.norm();
  return zn == 0.0 ? 0.0 : (x * x.transpose() - z).norm() / zn;
}

} // namespace

std::optional<ComplexVector> symmetric_rank_one_factor(const ComplexVector& z, double tol) {
  if (z.size() == 0 || z.norm() == 0.0) throw PreconditionError("symmetric_rank_one_factor: z = 0");
  const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(z.size()))));
  if (n * n != z.size()) throw ShapeError("symmetric_rank_one_factor: length is not a square");
  const ComplexDenseMatrix zm = unvec(z, n);
  RankOneFit fit = rank_one_fit(zm);
  if (fit.defect > tol) return std::nullopt;
  if (outer_error(fit.x, zm) > tol) return std::nullopt;
  return fit.x;
}

namespace {

// Gauss-Newton polish of Σ c_i Z_i = x xᵀ with the normalization wᴴc = 1.
void polish_member(const ComplexDenseMatrix& basis_vecs, Index n, ComplexVector& c, ComplexVector& x) {
  const Index d = basis_vecs.cols();
  const ComplexVector w = c / c.squaredNorm();
  for (int it = 0; it < 30; ++it) {
    ComplexVector f(n * n + 1);
    f.head(n * n) = basis_vecs * c - vec(ComplexDenseMatrix(x * x.transpose()));
    f(n * n) = (w.adjoint() * c)(0, 0) - 1.0;
    ComplexDenseMatrix jac = ComplexDenseMatrix::Zero(n * n + 1, d + n);
    jac.topLeftCorner(n * n, d) = basis_vecs;
    // d vec(x xᵀ) = (x ⊗ I + I ⊗ x) dx
    for (Index col = 0; col < n; ++col)
      for (Index row = 0; row < n; ++row) {
        const Index p = col * n + row;
        jac(p, d + row) -= x(col);
        jac(p, d + col) -= x(row);
      }
    jac.block(n * n, 0, 1, d) = w.adjoint();
    const ComplexVector step = jac.completeOrthogonalDecomposition().solve(-f);
    c += step.head(d);
    x += step.tail(n);
    if (step.norm() <= 1e-15 * (1.0 + c.norm() + x.norm())) break;
  }
}

struct MemberCandidate {
  ComplexVector c;
  ComplexVector x;
  double defect;
};

std::optional<MemberCandidate> refine_from(const ComplexDenseMatrix& basis_vecs, Index n,
                                           ComplexVector c, double tol, bool project) {
  const Index d = basis_vecs.cols();
  auto pinv = basis_vecs.completeOrthogonalDecomposition();
  RankOneFit fit;
  // Alternating projections between span and the rank-one variety.
  for (int it = 0; project && it < 200; ++it) {
    c /= c.norm();
    fit = rank_one_fit(unvec(basis_vecs * c, n));
    if (fit.defect < 1e-4) break;
    const ComplexVector target = vec(ComplexDenseMatrix(fit.x * fit.x.transpose()));
    ComplexVector next = pinv.solve(target);
    if (next.norm() == 0.0) return std::nullopt;
    if ((next / next.norm() - c).norm() < 1e-13) {
      c = next;
      break;
    }
    c = next;
  }
  c /= c.norm();
  fit = rank_one_fit(unvec(basis_vecs * c, n));
  if (fit.x.norm() == 0.0) return std::nullopt;
  ComplexVector x = fit.x;
  if (d > 0) polish_member(basis_vecs, n, c, x);
  const double cn = c.norm();
  if (!(cn > 0.0) || !std::isfinite(cn)) return std::nullopt;
  c /= cn;
  const ComplexDenseMatrix zm = unvec(basis_vecs * c, n);
  fit = rank_one_fit(zm);
  if (fit.defect > tol || outer_error(fit.x, zm) > tol) return std::nullopt;
  return MemberCandidate{c, fit.x, fit.defect};
}

bool same_direction(const ComplexVector& a, const ComplexVector& b, double tol) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return false;
  const double cosang = std::abs(a.dot(b)) / (na * nb);
  return std::sqrt(std::max(0.0, 1.0 - cosang * cosang)) <= tol;
}

} // namespace

std::vector<DecomposableMember> decomposable_members(const ComplexDenseMatrix& basis, double tol,
                                                     std::uint64_t seed, int starts) {
  if (basis.cols() == 0) return {};
  const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(basis.rows()))));
  if (n * n != basis.rows()) throw ShapeError("decomposable_members: rows are not a square");
  const Index d = basis.cols();

  std::vector<MemberCandidate> found;
  auto consider = [&](const ComplexVector& c0) {
    auto cand = refine_from(basis, n, c0, tol, true);
    if (!cand) cand = refine_from(basis, n, c0, tol, false);
    if (cand) {
      for (const auto& f : found)
        if (same_direction(f.x, cand->x, 1e-6)) return;
      found.push_back(std::move(*cand));
    }
  };

  if (d == 1) {
    consider(ComplexVector::Ones(1));
  } else {
    if (d == 2) {
      // Deterministic sweep of the projective line: charts (1, t) and (t, 1), |t| <= 1.
      constexpr int g = 13;
      auto point = [](int chart, int a, int b) {
        const Complex t(-1.0 + 2.0 * a / (g - 1), -1.0 + 2.0 * b / (g - 1));
        ComplexVector c(2);
        if (chart == 0) c << 1.0, t;
        else c << t, 1.0;
        return c;
      };
      for (int chart = 0; chart < 2; ++chart) {
        Eigen::MatrixXd defect(g, g);
        for (int a = 0; a < g; ++a)
          for (int b = 0; b < g; ++b) defect(a, b) = rank_one_fit(unvec(basis * point(chart, a, b), n)).defect;
        for (int a = 0; a < g; ++a)
          for (int b = 0; b < g; ++b) {
            bool local_min = defect(a, b) < 0.5;
            for (int da = -1; da <= 1 && local_min; ++da)
              for (int db = -1; db <= 1; ++db) {
                const int aa = a + da, bb = b + db;
                if ((da || db) && aa >= 0 && aa < g && bb >= 0 && bb < g && defect(aa, bb) < defect(a, b)) {
                  local_min = false;
                  break;
                }
              }
            if (local_min) consider(point(chart, a, b));
          }
      }
    }
    for (int s = 0; s < starts; ++s) {
      RandomStream rng(seed, static_cast<std::uint64_t>(s));
      consider(rng.complex_unit(d));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const MemberCandidate& a, const MemberCandidate& b) { return a.defect < b.defect; });
  std::vector<DecomposableMember> out;
  for (auto& f : found) out.push_back({std::move(f.c), std::move(f.x), f.defect});
  return out;
}

std::optional<DecomposableMember> decomposable_in_span(const ComplexDenseMatrix& basis, double tol,
                                                       std::uint64_t seed, int starts) {
  auto members = decomposable_members(basis, tol, seed, starts);
  if (members.empty()) return std::nullopt;
  return std::move(members.front());
}

} // namespace mpencil
