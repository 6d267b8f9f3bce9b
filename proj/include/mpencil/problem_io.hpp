#pragma once

// JSON problem and solution files. Complex numbers are [re, im] pairs; plain
// numbers are accepted on input as real values.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpencil/linalg_core.hpp"
#include "mpencil/two_param_solver.hpp"

namespace mpencil::io {

using json = nlohmann::json;

/// Malformed file contents. Maps to exit code 2 in the CLI.
class ParseError : public Error {
public:
  using Error::Error;
};

struct ProblemFile {
  PencilProblem problem;
  std::string name;
  std::optional<int> expected_solutions;
};

struct SolutionEntry {
  Triple lambda;
  ComplexVector x;
  double residual = 0;
  bool decomposable = false;
  bool continuum = false;
  std::string family;
};

struct SolutionFile {
  std::string path;  // solve path tag
  std::uint64_t seed = 0;
  double rank_tol = 0, residual_tol = 0;
  std::optional<Triple> alpha_used;
  double gamma_condition = 0;
  Index m = 0, n = 0;
  std::vector<SolutionEntry> solutions;
};

Complex parse_complex(const json& j);
json complex_json(Complex z);

ComplexDenseMatrix parse_matrix(const json& j);
json matrix_json(const ComplexDenseMatrix& m);

ProblemFile parse_problem(const json& j);
json problem_json(const ProblemFile& p);

SolutionFile from_report(const SolveReport& r);
json solution_json(const SolutionFile& s);
SolutionFile parse_solution(const json& j);

/// Reads and parses a JSON file; throws ParseError with the file name on failure.
json read_json(const std::string& path);

ProblemFile read_problem(const std::string& path);
SolutionFile read_solution(const std::string& path);

} // namespace mpencil::io
