#include "mpencil/pencil_solvers.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "mpencil/linalg_core.hpp"
#include "mpencil/random.hpp"

// Eigen has no complex QZ; the regular part goes through LAPACK.
extern "C" {
void zggev_(char*, char*, int*, std::complex<double>*, int*, std::complex<double>*, int*,
            std::complex<double>*, std::complex<double>*, std::complex<double>*, int*,
            std::complex<double>*, int*, std::complex<double>*, int*, double*, int*);
}

namespace mpencil {

ProjectiveEigenvalue::ProjectiveEigenvalue(const Triple& lambda) {
  if (lambda.norm() == 0.0) throw PreconditionError("projective eigenvalue must be nonzero");
  lambda_ = canonical_direction(ComplexVector(lambda));
}

std::optional<Eigen::Vector2cd> ProjectiveEigenvalue::chart0(double tiny) const {
  if (std::abs(lambda_(0)) <= tiny) return std::nullopt;
  return Eigen::Vector2cd(lambda_(1) / lambda_(0), lambda_(2) / lambda_(0));
}

double projective_distance(const ComplexVector& a, const ComplexVector& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const ComplexVector ua = a / na, ub = b / nb;
  // ‖ub − ua (uaᴴ ub)‖ is the sine directly, without the 1 − cos² cancellation.
  return std::min(1.0, (ub - ua * ua.dot(ub)).norm());
}

double ProjectiveEigenvalue::distance(const Triple& a, const Triple& b) {
  return projective_distance(ComplexVector(a), ComplexVector(b));
}

std::vector<Eigen::Vector2cd> generalized_eigenvalues(ComplexDenseMatrix a, ComplexDenseMatrix b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ShapeError("generalized_eigenvalues: expected square matrices of equal size");
  int n = static_cast<int>(a.rows());
  if (n == 0) return {};
  char jobvl = 'N', jobvr = 'N';
  int one = 1, lwork = std::max(1, 4 * n), info = 0;
  std::vector<std::complex<double>> alpha(n), beta(n), work(lwork), dummy(1);
  std::vector<double> rwork(8 * n);
  zggev_(&jobvl, &jobvr, &n, a.data(), &n, b.data(), &n, alpha.data(), beta.data(), dummy.data(), &one,
         dummy.data(), &one, work.data(), &lwork, rwork.data(), &info);
  if (info != 0) throw InternalError("zggev failed with info = " + std::to_string(info));
  std::vector<Eigen::Vector2cd> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.emplace_back(alpha[i], beta[i]);
  return out;
}

namespace {

struct Svd {
  ComplexDenseMatrix U, V;
  RealVector S;
};

Svd svd_full(const ComplexDenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0)
    return {ComplexDenseMatrix::Identity(m.rows(), m.rows()), ComplexDenseMatrix::Identity(m.cols(), m.cols()),
            RealVector(0)};
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

Index rank_above(const RealVector& s, double threshold) {
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++r;
  return r;
}

// Peel off right singular blocks of E + sF while F is column deficient.
void right_staircase(ComplexDenseMatrix& e, ComplexDenseMatrix& f, double thr, char side,
                     std::vector<StaircaseStep>& steps) {
  while (f.cols() > 0 && e.rows() > 0) {
    const Index p = e.rows(), q = e.cols();
    Svd sf = svd_full(f);
    const Index s = q - rank_above(sf.S, thr);
    if (s == 0) break;
    ComplexDenseMatrix v(q, q);
    v << sf.V.rightCols(s), sf.V.leftCols(q - s);
    const ComplexDenseMatrix ev = e * v;
    Svd se = svd_full(ev.leftCols(s));
    const Index rho = rank_above(se.S, thr);
    const ComplexDenseMatrix w = se.U.adjoint();
    const ComplexDenseMatrix e2 = w * ev;
    const ComplexDenseMatrix f2 = w * (f * v);
    steps.push_back({side, s, rho});
    e = e2.bottomRightCorner(p - rho, q - s);
    f = f2.bottomRightCorner(p - rho, q - s);
  }
}

} // namespace

RectPencilResult solve_rect_pencil(const ComplexDenseMatrix& a_in, const ComplexDenseMatrix& b_in, double tol,
                                   std::uint64_t seed) {
  if (a_in.rows() != b_in.rows() || a_in.cols() != b_in.cols())
    throw ShapeError("solve_rect_pencil: A is " + shape_string(a_in.rows(), a_in.cols()) + ", B is " +
                     shape_string(b_in.rows(), b_in.cols()));
  if (a_in.rows() < a_in.cols()) throw ShapeError("solve_rect_pencil: p < q is unsupported");
  if (a_in.cols() == 0) throw ShapeError("solve_rect_pencil: empty pencil");

  const Index q = a_in.cols();

  double na = norm2(a_in), nb = norm2(b_in);
  // A member that is roundoff next to the other is zero; scaling it up would invent structure.
  const double big = std::max(na, nb);
  if (na <= tol * big) na = 0.0;
  if (nb <= tol * big) nb = 0.0;
  const ComplexDenseMatrix a = na > 0 ? ComplexDenseMatrix(a_in / na) : ComplexDenseMatrix::Zero(a_in.rows(), q);
  const ComplexDenseMatrix b = nb > 0 ? ComplexDenseMatrix(b_in / nb) : ComplexDenseMatrix::Zero(b_in.rows(), q);
  const double thr = tol * 2.0;
  RandomStream rng(seed, 0x5e7a);
  // ν for the scaled pair maps back as (ν1 / ‖A‖, ν2 / ‖B‖).
  auto unscale = [&](const ComplexVector& nu) {
    ComplexVector o(2);
    o << (na > 0 ? nu(0) / na : nu(0)), (nb > 0 ? nu(1) / nb : nu(1));
    return canonical_direction(o);
  };

  RectPencilResult out;
  for (int t = 0; t < 2; ++t) {
    const ComplexVector nu = rng.complex_unit(2);
    out.normal_rank = std::max(out.normal_rank, rank_above(singular_values(nu(0) * a + nu(1) * b), thr));
  }
  const Index r = out.normal_rank;

  // Random unitary rotation of (ν1, ν2) so that no eigenvalue sits at infinity.
  Eigen::Matrix2cd g;
  {
    const ComplexDenseMatrix z = rng.complex_matrix(2, 2);
    Eigen::HouseholderQR<Eigen::Matrix2cd> qr(Eigen::Matrix2cd(z.topLeftCorner(2, 2)));
    g = qr.householderQ();
  }
  ComplexDenseMatrix e = g(0, 0) * a + g(0, 1) * b;
  ComplexDenseMatrix f = g(1, 0) * a + g(1, 1) * b;

  std::vector<Eigen::Vector2cd> candidates;
  if (r > 0) {
    right_staircase(e, f, thr, 'R', out.steps);
    ComplexDenseMatrix et = e.transpose(), ft = f.transpose();
    right_staircase(et, ft, thr, 'L', out.steps);
    e = et.transpose();
    f = ft.transpose();
    if (e.rows() != e.cols()) {
      // Inconsistent rank decisions; a random square projection keeps every
      // true eigenvalue and the filter below drops the spurious ones.
      const Index k = std::min(e.rows(), e.cols());
      const ComplexDenseMatrix pl = rng.complex_matrix(k, e.rows());
      const ComplexDenseMatrix pr = rng.complex_matrix(e.cols(), k);
      e = pl * e * pr;
      f = pl * f * pr;
    }
    out.regular_size = e.rows();
    for (const auto& ab : generalized_eigenvalues(e, -f)) {
      // E + (α/β) F singular  ⇔  β E + α F singular.
      const Eigen::Vector2cd rotated(ab(1), ab(0));
      if (rotated.norm() == 0.0) continue;
      candidates.push_back(g.transpose() * rotated);
    }
  }

  for (const auto& nu_raw : candidates) {
    const ComplexVector nu = canonical_direction(ComplexVector(nu_raw));
    const ComplexDenseMatrix pen = nu(0) * a + nu(1) * b;
    Svd sp = svd_full(pen);
    const Index rank_here = rank_above(sp.S, thr);
    if (rank_here >= r) continue;
    const ComplexVector nu_out = unscale(nu);
    bool duplicate = false;
    for (const auto& s : out.solutions)
      if (projective_distance(s.nu, nu_out) <= 1e-6) duplicate = true;
    if (duplicate) continue;
    OneParamSolution sol;
    sol.nu = nu_out;
    sol.basis = sp.V.rightCols(q - rank_here);
    sol.x = sol.basis.col(q - rank_here - 1);
    sol.kind = SolutionKind::isolated;
    out.solutions.push_back(std::move(sol));
  }

  if (r < q) {
    out.continuum = true;
    const ComplexVector nu = canonical_direction(rng.complex_unit(2));
    const ComplexDenseMatrix basis = nullspace_abs(nu(0) * a + nu(1) * b, thr);
    if (basis.cols() == 0) return out;
    OneParamSolution sol;
    sol.nu = unscale(nu);
    sol.basis = basis;
    sol.x = basis.col(basis.cols() - 1);
    sol.kind = SolutionKind::continuum_representative;
    out.solutions.push_back(std::move(sol));
  }
  return out;
}

} // namespace mpencil
