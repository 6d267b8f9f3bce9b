#pragma once

// One-parameter rectangular pencils, simultaneous solutions of the three
// deflated pencils, and the commuting joint eigenproblem of the generic path.

#include <optional>
#include <string>
#include <vector>

#include "mpencil/operators.hpp"
#include "mpencil/types.hpp"

namespace mpencil {

/// Point of C³ \ {0} up to scaling, stored unit-norm with the largest-modulus
/// entry real positive.
class ProjectiveEigenvalue {
public:
  ProjectiveEigenvalue() = default;
  explicit ProjectiveEigenvalue(const Triple& lambda);

  const Triple& lambda() const { return lambda_; }
  Complex operator[](int i) const { return lambda_(i); }

  /// (λ1/λ0, λ2/λ0), if |λ0| is above `tiny`.
  std::optional<Eigen::Vector2cd> chart0(double tiny = 1e-8) const;

  /// Sine of the angle between the complex lines.
  static double distance(const Triple& a, const Triple& b);
  double distance(const ProjectiveEigenvalue& other) const { return distance(lambda_, other.lambda_); }

private:
  Triple lambda_ = Triple(1, 0, 0);
};

/// Sine distance between two complex lines of any dimension.
double projective_distance(const ComplexVector& a, const ComplexVector& b);

enum class SolutionKind { isolated, continuum_representative };

struct OneParamSolution {
  Eigen::Vector2cd nu;       // canonical, unit norm
  ComplexVector x;           // unit null vector of ν1 A + ν2 B
  ComplexDenseMatrix basis;  // full numerical null space at ν
  SolutionKind kind = SolutionKind::isolated;
};

/// One deflation step of the staircase: columns removed, rank of the exposed block.
struct StaircaseStep {
  char side;  // 'R' right structure, 'L' left structure
  Index nullity;
  Index rank;
};

struct RectPencilResult {
  std::vector<OneParamSolution> solutions;  // isolated first, then continuum representatives
  bool continuum = false;
  Index normal_rank = 0;
  Index regular_size = 0;
  std::vector<StaircaseStep> steps;
};

/// All (ν1:ν2) where ν1 A + ν2 B (p×q, p >= q) loses rank below its normal rank,
/// plus a continuum representative when the normal rank is below q.
RectPencilResult solve_rect_pencil(const ComplexDenseMatrix& a, const ComplexDenseMatrix& b, double tol,
                                   std::uint64_t seed = 1);

/// Eigenvalues α/β of the square pair (A, B) via LAPACK zggev, as (α, β) pairs.
std::vector<Eigen::Vector2cd> generalized_eigenvalues(ComplexDenseMatrix a, ComplexDenseMatrix b);

struct DeflatedSolution {
  ProjectiveEigenvalue lambda;
  ComplexVector y;           // representative common null vector
  ComplexDenseMatrix basis;  // all common null vectors of the three Γ pencils
  bool continuum = false;    // lambda is one representative of a family
};

/// ‖(λi Γj − λj Γi) y‖ relative to (|λi|‖Γj‖ + |λj|‖Γi‖)‖y‖, maximized over the three pairs.
double deflated_residual(const DeterminantTriple& gamma, const Triple& lambda, const ComplexVector& y);

/// Simultaneous solutions of λi Γj − λj Γi, (i,j) ∈ {(0,1), (0,2), (1,2)}.
std::vector<DeflatedSolution> simultaneous_deflated_solutions(const DeterminantTriple& gamma, double tol,
                                                              std::uint64_t seed = 1,
                                                              double dedup_tol = 1e-6);

struct Combination {
  Triple alpha;
  double condition = 0;
};

/// First α (canonical basis first, then seeded random unit vectors) with
/// cond(α0 Γ0 + α1 Γ1 + α2 Γ2) below cond_threshold.
std::optional<Combination> find_nonsingular_combination(const DeterminantTriple& gamma, std::uint64_t seed,
                                                        int trials, double cond_threshold);

struct JointEigenpair {
  Triple lambda;     // eigenvalues of M0, M1, M2 on y
  ComplexVector y;   // unit common eigenvector
};

/// Simultaneous eigenpairs of pairwise-commuting M0, M1, M2.
std::vector<JointEigenpair> commuting_joint_eigs(const ComplexDenseMatrix& m0, const ComplexDenseMatrix& m1,
                                                 const ComplexDenseMatrix& m2, double tol,
                                                 std::uint64_t seed = 1);

/// max ‖MiMj − MjMi‖ / (‖Mi‖‖Mj‖) over the three pairs.
double commutation_residual(const ComplexDenseMatrix& m0, const ComplexDenseMatrix& m1,
                            const ComplexDenseMatrix& m2);

} // namespace mpencil
