#pragma once

// Brute-force reference solver for small problems: scan σ_min of the pencil
// over the three affine charts of P², refine grid minima with Gauss-Newton and
// merge projectively. Uses nothing but Eigen, so it stays independent of the
// deflation pipeline it is meant to check.

#include <vector>

#include "mpencil/linalg_core.hpp"
#include "mpencil/types.hpp"

namespace mpencil::oracle {

inline constexpr Index max_n = 4;
inline constexpr Index max_m = 6;

struct Config {
  int grid = 11;             // points per real axis; g⁴ samples per chart
  int refine_iters = 30;
  int max_starts = 400;      // grid minima refined per chart, best first
  int low_starts = 200;      // lowest samples refined per chart as extra starts
  double accept_tol = 1e-10; // relative residual ‖P(λ)x‖ of a converged root
  double sigma_tol = 1e-8;   // relative σ_min at a converged root
  double dedup_tol = 1e-6;
  bool parallel = true;
};

struct Root {
  Triple lambda;    // unit norm, canonical
  ComplexVector x;  // unit norm, canonical
  double residual;  // σ_min(P(λ)) / Σ|λi|‖Ai‖
};

/// Sampled σ_min(P(λ))/‖λ‖ on chart `chart` (λ_chart = 1, the other two entries
/// with real and imaginary parts on a uniform grid in [−1, 1]); index
/// ((a·g + b)·g + c)·g + d for (re u, im u, re v, im v).
std::vector<double> scan_chart_serial(const PencilProblem& p, int chart, int grid);
std::vector<double> scan_chart_parallel(const PencilProblem& p, int chart, int grid);

/// All isolated roots found. Throws ShapeError beyond n <= 4, m <= 6.
std::vector<Root> solve(const PencilProblem& p, const Config& cfg = {});

} // namespace mpencil::oracle
