#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mpencil {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Dense complex matrix. Holds A0, A1, A2, the commutators and the Γ triple.
using ComplexDenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Triple = Eigen::Vector3cd;

// Error hierarchy. The CLI maps these onto its exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input dimensions are inconsistent or unsupported (m <= n after normalization, ...).
class ShapeError : public Error {
public:
  using Error::Error;
};

/// A documented precondition on numerical input does not hold.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A claimed eigenvalue no longer shows rank loss at the current tolerance.
class StaleEigenvalueError : public Error {
public:
  using Error::Error;
};

/// The solver contradicted a guaranteed-existence result.
class InternalError : public Error {
public:
  using Error::Error;
};

/// Tolerances, seeds and budgets shared by the solver stack.
struct SolverConfig {
  double rank_tol = 1e-8;        // relative to the largest singular value
  double residual_tol = 1e-8;    // acceptance threshold for emitted solutions
  double decomposable_tol = 1e-6;
  double dedup_tol = 1e-6;       // projective sine distance
  double cond_threshold = 1e8;   // for the nonsingular-combination search
  std::uint64_t seed = 20240607;
  int combination_trials = 64;
  int decomposable_starts = 16;
  bool refine = true;            // Gauss-Newton polish on the original pencil
  bool force_simultaneous_path = false;
};

inline std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

} // namespace mpencil
