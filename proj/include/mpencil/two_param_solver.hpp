#pragma once

// Driver for the two-parameter problem (λ0 A0 + λ1 A1 + λ2 A2) x = 0 with
// m×n matrices, m > n.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpencil/linalg_core.hpp"
#include "mpencil/operators.hpp"
#include "mpencil/pencil_solvers.hpp"
#include "mpencil/types.hpp"

namespace mpencil {

struct Solution {
  ProjectiveEigenvalue lambda;
  ComplexVector x;            // unit norm, canonical sign
  double residual = 0;        // σ_min(Σ λi Ai) / Σ |λi| ‖Ai‖
  bool decomposable = false;  // x came from a strongly decomposable lift
  bool continuum = false;     // lambda represents a positive-dimensional family
  std::string family;         // "all", "lambda<i>=0" or "plane" for continuum members
};

enum class SolvePath { generic_commuting, simultaneous_pencils, no_solution };

const char* to_string(SolvePath p);
SolvePath solve_path_from_string(const std::string& s);

struct Diagnostics {
  std::vector<std::string> notes;        // rank decisions, fallbacks, dropped candidates
  std::map<std::string, double> timings; // milliseconds per stage
};

struct SolveReport {
  std::vector<Solution> solutions;
  SolvePath path = SolvePath::no_solution;
  std::optional<Triple> alpha_used;
  double gamma_condition = 0;
  Index m = 0, n = 0;
  SolverConfig config;
  Diagnostics diagnostics;
};

SolveReport solve(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1, const ComplexDenseMatrix& a2,
                  const SolverConfig& config = {});

inline SolveReport solve(const PencilProblem& p, const SolverConfig& config = {}) {
  return solve(p.A0, p.A1, p.A2, config);
}

/// Symmetric n×n matrix z = V̂ᵀ y (integer) or Vᵀ y (orthogonal), as vec.
ComplexVector lift_deflated(const ComplexVector& y, Index n, Scaling scaling = Scaling::integer);

struct Extraction {
  ComplexVector x;
  bool decomposable = false;
};

/// x from the lift of y when it is strongly decomposable, else from the null
/// space of λ0A0 + λ1A1 + λ2A2. Throws StaleEigenvalueError if that is empty.
Extraction extract_eigenvector(const ProjectiveEigenvalue& lambda, const ComplexVector& y, const PencilProblem& p,
                               double tol, Scaling scaling = Scaling::integer);

struct VerifyReport {
  double residual = 0;   // ‖P(λ)x‖ / (Σ|λi|‖Ai‖ ‖x‖)
  double sigma_min = 0;  // σ_min(P(λ)) / Σ|λi|‖Ai‖
  bool pass = false;
};

VerifyReport verify_solution(const PencilProblem& p, const Triple& lambda, const ComplexVector& x, double tol);

struct InflatedReport {
  std::array<double, 3> residual{};  // pairs (0,1), (0,2), (1,2)
  std::array<bool, 3> pass{};
  bool all() const { return pass[0] && pass[1] && pass[2]; }
};

/// ‖(λi Δj − λj Δi)(x⊗x)‖ / ((|λi| ‖Δj‖ + |λj| ‖Δi‖) ‖x‖²), with ‖Δk‖ bounded by 2‖A‖‖A'‖.
InflatedReport verify_inflated(const PencilProblem& p, const Triple& lambda, const ComplexVector& x, double tol);

} // namespace mpencil
