#include "mpencil/pencil_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "mpencil/linalg_core.hpp"
#include "mpencil/random.hpp"

namespace mpencil {

namespace {

constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

double condition_number(const ComplexDenseMatrix& m) {
  const RealVector s = singular_values(m);
  const double lo = s(s.size() - 1);
  return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

// [λ0Γ1 − λ1Γ0; λ0Γ2 − λ2Γ0; λ1Γ2 − λ2Γ1], each block scaled to unit weight.
ComplexDenseMatrix stacked_pencils(const std::array<ComplexDenseMatrix, 3>& g, const std::array<double, 3>& nrm,
                                   const Triple& lambda) {
  const Index p = g[0].rows(), q = g[0].cols();
  ComplexDenseMatrix out(3 * p, q);
  for (int k = 0; k < 3; ++k) {
    const int i = pairs[k][0], j = pairs[k][1];
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    const double w = std::abs(lambda(i)) * nrm[uj] + std::abs(lambda(j)) * nrm[ui];
    ComplexDenseMatrix blk = lambda(i) * g[uj] - lambda(j) * g[ui];
    if (w > 0) blk /= w;
    out.middleRows(k * p, p) = blk;
  }
  return out;
}

} // namespace

double deflated_residual(const DeterminantTriple& gamma, const Triple& lambda, const ComplexVector& y) {
  double worst = 0.0;
  const double ny = y.norm();
  for (const auto& pr : pairs) {
    const int i = pr[0], j = pr[1];
    const double w = (std::abs(lambda(i)) * norm2(gamma[j]) + std::abs(lambda(j)) * norm2(gamma[i])) * ny;
    const double r = (lambda(i) * (gamma[j] * y) - lambda(j) * (gamma[i] * y)).norm();
    if (w > 0) worst = std::max(worst, r / w);
    else if (r > 0) worst = std::numeric_limits<double>::infinity();
  }
  return worst;
}

std::optional<Combination> find_nonsingular_combination(const DeterminantTriple& gamma, std::uint64_t seed,
                                                        int trials, double cond_threshold) {
  if (gamma.rows() != gamma.cols())
    throw ShapeError("find_nonsingular_combination: Γ is " + shape_string(gamma.rows(), gamma.cols()) +
                     ", expected square");
  if (gamma.rows() == 0) return std::nullopt;
  auto attempt = [&](const Triple& alpha) -> std::optional<Combination> {
    const double c = condition_number(alpha(0) * gamma[0] + alpha(1) * gamma[1] + alpha(2) * gamma[2]);
    if (c < cond_threshold) return Combination{alpha, c};
    return std::nullopt;
  };
  for (int e = 0; e < 3; ++e)
    if (auto c = attempt(Triple::Unit(e))) return c;
  RandomStream rng(seed, 0xa1fa);
  for (int t = 0; t < trials; ++t)
    if (auto c = attempt(Triple(rng.complex_unit(3)))) return c;
  return std::nullopt;
}

std::vector<DeflatedSolution> simultaneous_deflated_solutions(const DeterminantTriple& gamma, double tol,
                                                              std::uint64_t seed, double dedup_tol) {
  const std::array<ComplexDenseMatrix, 3>& g = gamma.gamma;
  const Index q = gamma.cols();
  if (g[1].rows() != g[0].rows() || g[2].rows() != g[0].rows() || g[1].cols() != q || g[2].cols() != q)
    throw ShapeError("simultaneous_deflated_solutions: inconsistent Γ dimensions");
  const std::array<double, 3> nrm = {norm2(g[0]), norm2(g[1]), norm2(g[2])};
  const double scale = std::max({nrm[0], nrm[1], nrm[2]});
  RandomStream rng(seed, 0xdef1);
  std::vector<DeflatedSolution> out;
  if (q == 0) return out;

  auto add = [&](const Triple& lambda_raw, bool continuum) {
    if (lambda_raw.norm() == 0.0) return;
    const ProjectiveEigenvalue lambda(lambda_raw);
    for (const auto& s : out)
      if (s.lambda.distance(lambda) <= dedup_tol) return;
    ComplexDenseMatrix basis = nullspace_abs(stacked_pencils(g, nrm, lambda.lambda()), tol);
    if (basis.cols() == 0) return;
    ComplexVector y = canonical_direction(basis.col(basis.cols() - 1));
    if (deflated_residual(gamma, lambda.lambda(), y) > tol) return;
    out.push_back({lambda, y, std::move(basis), continuum});
  };

  if (scale == 0.0) {
    add(Triple(rng.complex_unit(3)), true);
    return out;
  }

  // Common null space of all three Γ: every λ is a solution there.
  ComplexDenseMatrix stacked(3 * g[0].rows(), q);
  stacked << g[0] / scale, g[1] / scale, g[2] / scale;
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(stacked, Eigen::ComputeFullV);
  Index r = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  std::vector<DeflatedSolution> families;
  if (r < q) {
    const ProjectiveEigenvalue lambda{Triple(rng.complex_unit(3))};
    const ComplexDenseMatrix c = svd.matrixV().rightCols(q - r);
    families.push_back({lambda, canonical_direction(c.col(0)), c, true});
  }
  if (r == 0) return families;
  const ComplexDenseMatrix restrict_map = svd.matrixV().leftCols(r);
  std::array<ComplexDenseMatrix, 3> gr;
  for (int i = 0; i < 3; ++i) gr[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i)] * restrict_map;

  // Pivot pair: most regular random member.
  int pivot = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    const auto ui = static_cast<std::size_t>(pairs[k][0]), uj = static_cast<std::size_t>(pairs[k][1]);
    const ComplexVector nu = rng.complex_unit(2);
    const double den = nrm[ui] + nrm[uj];
    if (den == 0.0) continue;
    const RealVector s = singular_values(nu(0) * gr[uj] - nu(1) * gr[ui]);
    const double proxy = s(s.size() - 1) / den;
    if (proxy > best) {
      best = proxy;
      pivot = k;
    }
  }
  const int i = pairs[pivot][0], j = pairs[pivot][1], k = 3 - i - j;
  const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j), uk = static_cast<std::size_t>(k);

  // λi Γj − λj Γi with ν = (λi, λj).
  const RectPencilResult primary = solve_rect_pencil(gr[uj], -gr[ui], tol, derive_seed(seed, 1));
  std::uint64_t stream = 2;
  for (const auto& sol : primary.solutions) {
    const Complex ai = sol.nu(0), aj = sol.nu(1);
    const ComplexDenseMatrix& nb = sol.basis;
    const Index p = gr[0].rows();
    // t·[ai Γk N; aj Γk N] + λk·[−Γi N; −Γj N]
    ComplexDenseMatrix sa(2 * p, nb.cols()), sb(2 * p, nb.cols());
    sa << ai * (gr[uk] * nb), aj * (gr[uk] * nb);
    sb << -(gr[ui] * nb), -(gr[uj] * nb);
    if (sa.norm() == 0.0 && sb.norm() == 0.0) continue;
    const RectPencilResult secondary = solve_rect_pencil(sa, sb, tol, derive_seed(seed, stream++));
    const bool family = sol.kind == SolutionKind::continuum_representative;
    for (const auto& s2 : secondary.solutions) {
      Triple lambda;
      lambda(i) = s2.nu(0) * ai;
      lambda(j) = s2.nu(0) * aj;
      lambda(k) = s2.nu(1);
      add(lambda, family || s2.kind == SolutionKind::continuum_representative);
    }
  }

  // λ = e_k makes the pivot pencil vanish; it is a solution iff Γi, Γj share a null vector.
  {
    ComplexDenseMatrix st(2 * gr[0].rows(), r);
    st << gr[ui] / scale, gr[uj] / scale;
    if (nullspace_abs(st, tol).cols() > 0) add(Triple::Unit(k), false);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const DeflatedSolution& a, const DeflatedSolution& b) { return !a.continuum && b.continuum; });
  out.insert(out.end(), families.begin(), families.end());
  return out;
}

} // namespace mpencil
