#include "mpencil/pencil_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mpencil/linalg_core.hpp"
#include "mpencil/random.hpp"

namespace mpencil {

double commutation_residual(const ComplexDenseMatrix& m0, const ComplexDenseMatrix& m1,
                            const ComplexDenseMatrix& m2) {
  const ComplexDenseMatrix* ms[3] = {&m0, &m1, &m2};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double den = norm2(*ms[i]) * norm2(*ms[j]);
      if (den == 0.0) continue;
      const ComplexDenseMatrix c = (*ms[i]) * (*ms[j]) - (*ms[j]) * (*ms[i]);
      worst = std::max(worst, norm2(c) / den);
    }
  return worst;
}

namespace {

constexpr double cluster_tol = 1e-6;
constexpr double vector_cond_limit = 1e8;
constexpr int beta_draws = 4;

using Triplet = std::array<ComplexDenseMatrix, 3>;

ComplexDenseMatrix combine(const Triplet& m, const ComplexVector& beta) {
  return beta(0) * m[0] + beta(1) * m[1] + beta(2) * m[2];
}

double min_separation(const ComplexVector& mu) {
  double sep = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < mu.size(); ++a)
    for (Index b = a + 1; b < mu.size(); ++b) sep = std::min(sep, std::abs(mu(a) - mu(b)));
  return sep;
}

double condition(const ComplexDenseMatrix& v) {
  const RealVector s = singular_values(v);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  return lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity();
}

JointEigenpair rayleigh(const Triplet& m, const ComplexVector& y_raw) {
  const ComplexVector y = y_raw / y_raw.norm();
  Triple lambda;
  for (int i = 0; i < 3; ++i) lambda(i) = y.dot(m[static_cast<std::size_t>(i)] * y);
  return {lambda, y};
}

// Eigenvectors from a single well-separated combination, if one is found.
std::optional<std::vector<JointEigenpair>> try_simple(const Triplet& m, RandomStream& rng, ComplexDenseMatrix& last) {
  const double scale = std::max({norm2(m[0]), norm2(m[1]), norm2(m[2]), 1e-300});
  for (int t = 0; t < beta_draws; ++t) {
    const ComplexVector beta = rng.complex_unit(3);
    last = combine(m, beta);
    Eigen::ComplexEigenSolver<ComplexDenseMatrix> es(last, true);
    if (es.info() != Eigen::Success) continue;
    if (min_separation(es.eigenvalues()) <= cluster_tol * scale) continue;
    if (condition(es.eigenvectors()) > vector_cond_limit) continue;
    std::vector<JointEigenpair> out;
    for (Index c = 0; c < last.cols(); ++c) out.push_back(rayleigh(m, es.eigenvectors().col(c)));
    return out;
  }
  return std::nullopt;
}

std::vector<JointEigenpair> joint(const Triplet& m, RandomStream& rng, int depth);

// Clustered spectrum: split by the eigenspaces of the combination, each of
// which is invariant under every Mi, and recurse on the restrictions.
std::vector<JointEigenpair> clustered(const Triplet& m, const ComplexDenseMatrix& comb, RandomStream& rng,
                                      int depth) {
  const Index n = comb.rows();
  const double scale = std::max(norm2(comb), 1e-300);
  Eigen::ComplexSchur<ComplexDenseMatrix> schur(comb);
  const ComplexVector mu = schur.matrixT().diagonal();
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  std::vector<Complex> centers;
  for (Index a = 0; a < n; ++a) {
    if (owner[static_cast<std::size_t>(a)] >= 0) continue;
    const int id = static_cast<int>(centers.size());
    Complex sum = 0;
    int count = 0;
    for (Index b = a; b < n; ++b)
      if (owner[static_cast<std::size_t>(b)] < 0 && std::abs(mu(a) - mu(b)) <= std::sqrt(cluster_tol) * scale) {
        owner[static_cast<std::size_t>(b)] = id;
        sum += mu(b);
        ++count;
      }
    centers.push_back(sum / static_cast<double>(count));
  }

  std::vector<JointEigenpair> out;
  for (const Complex& c : centers) {
    const ComplexDenseMatrix shifted = comb - c * ComplexDenseMatrix::Identity(n, n);
    const RealVector s = singular_values(shifted);
    // Loose threshold: a defective cluster only splits to O(sqrt(eps)).
    ComplexDenseMatrix w = nullspace_abs(shifted, std::sqrt(cluster_tol) * scale);
    if (w.cols() == 0) w = nullspace_abs(shifted, s(s.size() - 1) * (1 + 1e-12));
    if (w.cols() == 1 || depth > 0) {
      Triplet sub;
      for (int i = 0; i < 3; ++i) sub[static_cast<std::size_t>(i)] = w.adjoint() * m[static_cast<std::size_t>(i)] * w;
      const double d = static_cast<double>(w.cols());
      Triple lambda;
      for (int i = 0; i < 3; ++i) lambda(i) = sub[static_cast<std::size_t>(i)].trace() / d;
      for (Index k = 0; k < w.cols(); ++k) out.push_back({lambda, w.col(k)});
      continue;
    }
    Triplet sub;
    for (int i = 0; i < 3; ++i) sub[static_cast<std::size_t>(i)] = w.adjoint() * m[static_cast<std::size_t>(i)] * w;
    for (const auto& pair : joint(sub, rng, depth + 1)) out.push_back({pair.lambda, w * pair.y});
  }
  return out;
}

std::vector<JointEigenpair> joint(const Triplet& m, RandomStream& rng, int depth) {
  ComplexDenseMatrix last;
  if (auto simple = try_simple(m, rng, last)) return *simple;
  return clustered(m, last, rng, depth);
}

} // namespace

std::vector<JointEigenpair> commuting_joint_eigs(const ComplexDenseMatrix& m0, const ComplexDenseMatrix& m1,
                                                 const ComplexDenseMatrix& m2, double tol, std::uint64_t seed) {
  const Index n = m0.rows();
  for (const ComplexDenseMatrix* m : {&m0, &m1, &m2})
    if (m->rows() != n || m->cols() != n)
      throw ShapeError("commuting_joint_eigs: expected three square matrices of equal size");
  if (n == 0) return {};
  const double res = commutation_residual(m0, m1, m2);
  if (res > tol)
    throw PreconditionError("commuting_joint_eigs: commutation residual " + std::to_string(res) +
                            " exceeds tolerance");
  RandomStream rng(seed, 0x101e);
  std::vector<JointEigenpair> out = joint({m0, m1, m2}, rng, 0);
  for (auto& p : out) p.y = canonical_direction(p.y);
  return out;
}

} // namespace mpencil
