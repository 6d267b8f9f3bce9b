// mpencil: solve, inspect and verify two-parameter rectangular pencils.
//
//   mpencil solve  problem.json [--output out.json]
//   mpencil gamma  problem.json [--scaling integer|orthogonal]
//   mpencil verify problem.json solutions.json
//   mpencil oracle problem.json [--grid 11]
//
// Exit codes: 0 ok, 1 verification failure, 2 parse/shape error,
// 3 verified no-solution, 4 internal failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpencil/oracle.hpp"
#include "mpencil/problem_io.hpp"
#include "mpencil/two_param_solver.hpp"

using namespace mpencil;

namespace {

enum Exit { ok = 0, verify_failed = 1, bad_input = 2, no_solution = 3, internal = 4 };

void emit(const io::json& j, const std::string& output) {
  const std::string text = j.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw io::ParseError("cannot write '" + output + "'");
  out << text;
}

std::string number(double v) {
  char buf[40];
  if (v == std::round(v) && std::abs(v) < 1e15) std::snprintf(buf, sizeof buf, "%.0f", v);
  else std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_matrix(const std::string& title, const ComplexDenseMatrix& m) {
  std::cout << title << " (" << m.rows() << "x" << m.cols() << ")\n";
  const bool real = m.imag().isZero(0);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::string cell = number(m(r, c).real());
      if (!real) cell += (m(r, c).imag() < 0 ? "-" : "+") + number(std::abs(m(r, c).imag())) + "i";
      std::printf("%s%*s", c ? " " : "  ", real ? 8 : 24, cell.c_str());
    }
    std::printf("\n");
  }
}

int cmd_solve(const std::string& input, const SolverConfig& cfg, const std::string& output) {
  const io::ProblemFile pf = io::read_problem(input);
  const SolveReport rep = solve(pf.problem, cfg);
  emit(io::solution_json(io::from_report(rep)), output);
  for (const auto& note : rep.diagnostics.notes) std::cerr << "note: " << note << "\n";
  if (rep.path == SolvePath::no_solution) {
    std::cerr << "no solution: the simultaneous deflated pencils have no common eigenvalue\n";
    return no_solution;
  }
  return ok;
}

int cmd_gamma(const std::string& input, const std::string& scaling) {
  const io::ProblemFile pf = io::read_problem(input);
  const DeterminantTriple g = kronecker_determinants(pf.problem, scaling_from_string(scaling));
  for (int i = 0; i < 3; ++i) {
    if (i) std::cout << "\n";
    print_matrix("Gamma" + std::to_string(i) + " " + scaling, g[i]);
  }
  return ok;
}

int cmd_verify(const std::string& input, const std::string& solutions, double tol) {
  const io::ProblemFile pf = io::read_problem(input);
  const io::SolutionFile sf = io::read_solution(solutions);
  const PencilProblem& p = pf.problem;
  for (const auto& e : sf.solutions)
    if (e.x.size() != p.n())
      throw io::ParseError("solution x has length " + std::to_string(e.x.size()) + ", problem has n = " +
                           std::to_string(p.n()));
  bool all = true;
  std::printf("%4s  %12s  %12s  %12s  %s\n", "#", "residual", "sigma_min", "inflated", "status");
  for (std::size_t k = 0; k < sf.solutions.size(); ++k) {
    const auto& e = sf.solutions[k];
    const VerifyReport vr = verify_solution(p, e.lambda, e.x, tol);
    const InflatedReport ir = verify_inflated(p, e.lambda, e.x, tol);
    const double worst = std::max({ir.residual[0], ir.residual[1], ir.residual[2]});
    const bool pass = vr.pass && ir.all();
    all = all && pass;
    std::printf("%4zu  %12.3e  %12.3e  %12.3e  %s\n", k, vr.residual, vr.sigma_min, worst, pass ? "PASS" : "FAIL");
  }
  return all ? ok : verify_failed;
}

int cmd_oracle(const std::string& input, const oracle::Config& cfg, std::uint64_t seed, const std::string& output) {
  const io::ProblemFile pf = io::read_problem(input);
  const PencilProblem& p = pf.problem;
  if (p.n() > oracle::max_n || p.m() > oracle::max_m)
    throw ShapeError("oracle is limited to n <= 4, m <= 6; problem is " + shape_string(p.m(), p.n()));
  io::SolutionFile sf;
  sf.path = "oracle";
  sf.seed = seed;
  sf.rank_tol = cfg.sigma_tol;
  sf.residual_tol = cfg.accept_tol;
  sf.m = p.m();
  sf.n = p.n();
  for (const auto& r : oracle::solve(p, cfg)) sf.solutions.push_back({r.lambda, r.x, r.residual, false, false, ""});
  emit(io::solution_json(sf), output);
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-parameter rectangular matrix pencil solver"};
  app.require_subcommand(1);

  std::string input, solutions, output, scaling = "integer";
  SolverConfig cfg;
  double verify_tol = 1e-8;
  oracle::Config ocfg;

  auto* solve_cmd = app.add_subcommand("solve", "Find all eigenvalues and eigenvectors");
  solve_cmd->add_option("input", input, "Problem JSON")->required();
  solve_cmd->add_option("--tol", cfg.rank_tol, "Rank tolerance")->capture_default_str();
  solve_cmd->add_option("--residual-tol", cfg.residual_tol, "Residual acceptance threshold")->capture_default_str();
  solve_cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  solve_cmd->add_option("--trials", cfg.combination_trials, "Nonsingular-combination trial budget")
      ->capture_default_str();
  solve_cmd->add_option("--cond-threshold", cfg.cond_threshold, "Condition limit for the combination")
      ->capture_default_str();
  solve_cmd->add_flag("--force-simultaneous", cfg.force_simultaneous_path, "Skip the commuting-matrix path");
  solve_cmd->add_option("--output,-o", output, "Output path (default: stdout)");

  auto* gamma_cmd = app.add_subcommand("gamma", "Print the Kronecker determinants");
  gamma_cmd->add_option("input", input, "Problem JSON")->required();
  gamma_cmd->add_option("--scaling", scaling, "integer or orthogonal")
      ->check(CLI::IsMember({"integer", "orthogonal"}))
      ->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "Check a solution file against a problem");
  verify_cmd->add_option("input", input, "Problem JSON")->required();
  verify_cmd->add_option("solutions", solutions, "Solution JSON")->required();
  verify_cmd->add_option("--tol", verify_tol, "Residual tolerance")->capture_default_str();

  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force chart scan (n <= 4, m <= 6)");
  oracle_cmd->add_option("input", input, "Problem JSON")->required();
  oracle_cmd->add_option("--grid", ocfg.grid, "Grid points per real axis")->check(CLI::Range(2, 41))
      ->capture_default_str();
  oracle_cmd->add_option("--refine-iters", ocfg.refine_iters, "Gauss-Newton iterations")->check(CLI::Range(1, 1000))
      ->capture_default_str();
  oracle_cmd->add_option("--output,-o", output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : bad_input;
  }

  try {
    if (*solve_cmd) return cmd_solve(input, cfg, output);
    if (*gamma_cmd) return cmd_gamma(input, scaling);
    if (*verify_cmd) return cmd_verify(input, solutions, verify_tol);
    if (*oracle_cmd) return cmd_oracle(input, ocfg, cfg.seed, output);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_input;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
  return internal;
}
