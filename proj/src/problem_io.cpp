#include "mpencil/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace mpencil::io {

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("expected a number or an [re, im] pair, got " + j.dump());
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

ComplexDenseMatrix parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  ComplexDenseMatrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ParseError("matrix row " + std::to_string(r) + " has inconsistent length");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Index>(r), static_cast<Index>(c)) = parse_complex(j[r][c]);
  }
  return m;
}

json matrix_json(const ComplexDenseMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

ComplexVector parse_vector(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of complex numbers");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = parse_complex(j[i]);
  return v;
}

json vector_json(const ComplexVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

// JSON has no infinity; null stands in for it.
json real_json(double d) { return std::isfinite(d) ? json(d) : json(nullptr); }

double parse_real(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw ParseError("expected a number, got " + j.dump());
  return j.get<double>();
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

} // namespace

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) throw ParseError("problem file must be a JSON object");
  ProblemFile p;
  p.problem.A0 = parse_matrix(field(j, "A0"));
  p.problem.A1 = parse_matrix(field(j, "A1"));
  p.problem.A2 = parse_matrix(field(j, "A2"));
  try {
    check_same_shape(p.problem.A0, p.problem.A1, p.problem.A2);
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
  if (j.contains("name")) p.name = j.at("name").get<std::string>();
  if (j.contains("expected_solutions")) p.expected_solutions = j.at("expected_solutions").get<int>();
  return p;
}

json problem_json(const ProblemFile& p) {
  json j;
  if (!p.name.empty()) j["name"] = p.name;
  if (p.expected_solutions) j["expected_solutions"] = *p.expected_solutions;
  j["A0"] = matrix_json(p.problem.A0);
  j["A1"] = matrix_json(p.problem.A1);
  j["A2"] = matrix_json(p.problem.A2);
  return j;
}

SolutionFile from_report(const SolveReport& r) {
  SolutionFile s;
  s.path = to_string(r.path);
  s.seed = r.config.seed;
  s.rank_tol = r.config.rank_tol;
  s.residual_tol = r.config.residual_tol;
  s.alpha_used = r.alpha_used;
  s.gamma_condition = r.gamma_condition;
  s.m = r.m;
  s.n = r.n;
  for (const auto& sol : r.solutions)
    s.solutions.push_back({sol.lambda.lambda(), sol.x, sol.residual, sol.decomposable, sol.continuum, sol.family});
  return s;
}

json solution_json(const SolutionFile& s) {
  json report;
  report["path"] = s.path;
  report["seed"] = s.seed;
  report["tolerances"] = {{"rank", s.rank_tol}, {"residual", s.residual_tol}};
  report["alpha_used"] = s.alpha_used ? vector_json(ComplexVector(*s.alpha_used)) : json(nullptr);
  report["gamma_condition"] = real_json(s.gamma_condition);
  report["m"] = s.m;
  report["n"] = s.n;
  json sols = json::array();
  for (const auto& e : s.solutions) {
    json o;
    o["lambda"] = vector_json(ComplexVector(e.lambda));
    if (std::abs(e.lambda(0)) > 1e-8) {
      ComplexVector chart(2);
      chart << e.lambda(1) / e.lambda(0), e.lambda(2) / e.lambda(0);
      o["lambda_chart_lambda0_eq_1"] = vector_json(chart);
    }
    o["x"] = vector_json(e.x);
    o["residual"] = real_json(e.residual);
    o["decomposable"] = e.decomposable;
    o["continuum"] = e.continuum;
    if (!e.family.empty()) o["family"] = e.family;
    sols.push_back(std::move(o));
  }
  return {{"report", report}, {"solutions", sols}};
}

SolutionFile parse_solution(const json& j) {
  SolutionFile s;
  try {
    const json& rep = field(j, "report");
    s.path = field(rep, "path").get<std::string>();
    s.seed = field(rep, "seed").get<std::uint64_t>();
    const json& tol = field(rep, "tolerances");
    s.rank_tol = parse_real(field(tol, "rank"));
    s.residual_tol = parse_real(field(tol, "residual"));
    const json& alpha = field(rep, "alpha_used");
    if (!alpha.is_null()) {
      const ComplexVector a = parse_vector(alpha);
      if (a.size() != 3) throw ParseError("alpha_used must have three entries");
      s.alpha_used = Triple(a);
    }
    s.gamma_condition = parse_real(field(rep, "gamma_condition"));
    s.m = field(rep, "m").get<Index>();
    s.n = field(rep, "n").get<Index>();
    for (const auto& o : field(j, "solutions")) {
      SolutionEntry e;
      const ComplexVector l = parse_vector(field(o, "lambda"));
      if (l.size() != 3) throw ParseError("lambda must have three entries");
      e.lambda = l;
      e.x = parse_vector(field(o, "x"));
      e.residual = parse_real(field(o, "residual"));
      e.decomposable = field(o, "decomposable").get<bool>();
      e.continuum = field(o, "continuum").get<bool>();
      if (o.contains("family")) e.family = o.at("family").get<std::string>();
      s.solutions.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution file: ") + e.what());
  }
  return s;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

ProblemFile read_problem(const std::string& path) {
  try {
    return parse_problem(read_json(path));
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

SolutionFile read_solution(const std::string& path) { return parse_solution(read_json(path)); }

} // namespace mpencil::io
