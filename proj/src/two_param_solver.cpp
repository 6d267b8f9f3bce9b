#include "mpencil/two_param_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "mpencil/kron_structure.hpp"
#include "mpencil/random.hpp"

namespace mpencil {

const char* to_string(SolvePath p) {
  switch (p) {
  case SolvePath::generic_commuting: return "generic-commuting";
  case SolvePath::simultaneous_pencils: return "simultaneous-pencils";
  case SolvePath::no_solution: return "no-solution";
  }
  return "no-solution";
}

SolvePath solve_path_from_string(const std::string& s) {
  if (s == "generic-commuting") return SolvePath::generic_commuting;
  if (s == "simultaneous-pencils") return SolvePath::simultaneous_pencils;
  if (s == "no-solution") return SolvePath::no_solution;
  throw PreconditionError("unknown solve path '" + s + "'");
}

ComplexVector lift_deflated(const ComplexVector& y, Index n, Scaling scaling) {
  if (y.size() != sym_dim(n))
    throw ShapeError("lift_deflated: y has length " + std::to_string(y.size()) + ", expected " +
                     std::to_string(sym_dim(n)));
  const double off = scaling == Scaling::integer ? 1.0 : 1.0 / std::sqrt(2.0);
  ComplexDenseMatrix z = ComplexDenseMatrix::Zero(n, n);
  for (Index d = 0; d < n; ++d) z(d, d) = y(d);
  for (const auto& pr : strict_pairs(n)) {
    const Complex v = off * y(n + pr.k0());
    z(pr.row0(), pr.col0()) = v;
    z(pr.col0(), pr.row0()) = v;
  }
  return vec(z);
}

namespace {

double weighted_norm(const PencilProblem& p, const Triple& lambda) {
  return std::abs(lambda(0)) * norm2(p.A0) + std::abs(lambda(1)) * norm2(p.A1) + std::abs(lambda(2)) * norm2(p.A2);
}

double relative_residual(const PencilProblem& p, const Triple& lambda, const ComplexVector& x) {
  const double w = weighted_norm(p, lambda) * x.norm();
  const double r = (p.pencil(lambda) * x).norm();
  return w > 0 ? r / w : (r > 0 ? std::numeric_limits<double>::infinity() : 0.0);
}

} // namespace

VerifyReport verify_solution(const PencilProblem& p, const Triple& lambda, const ComplexVector& x, double tol) {
  VerifyReport out;
  const double w = weighted_norm(p, lambda);
  out.residual = relative_residual(p, lambda, x);
  const RealVector s = singular_values(p.pencil(lambda));
  const double smin = s.size() ? s(s.size() - 1) : 0.0;
  out.sigma_min = w > 0 ? smin / w : (smin > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  out.pass = x.norm() > 0 && lambda.norm() > 0 && out.residual <= tol && out.sigma_min <= tol;
  return out;
}

InflatedReport verify_inflated(const PencilProblem& p, const Triple& lambda, const ComplexVector& x, double tol) {
  // Δk (x⊗x) = Aj x ⊗ Al x − Al x ⊗ Aj x for the cyclic (k, j, l).
  std::array<ComplexVector, 3> ax;
  std::array<double, 3> an{};
  for (int i = 0; i < 3; ++i) {
    ax[static_cast<std::size_t>(i)] = p[i] * x;
    an[static_cast<std::size_t>(i)] = norm2(p[i]);
  }
  auto kr = [](const ComplexVector& u, const ComplexVector& v) {
    ComplexVector o(u.size() * v.size());
    for (Index a = 0; a < u.size(); ++a) o.segment(a * v.size(), v.size()) = u(a) * v;
    return o;
  };
  std::array<ComplexVector, 3> dz;
  std::array<double, 3> dn{};
  for (int k = 0; k < 3; ++k) {
    const auto j = static_cast<std::size_t>((k + 1) % 3), l = static_cast<std::size_t>((k + 2) % 3);
    dz[static_cast<std::size_t>(k)] = kr(ax[j], ax[l]) - kr(ax[l], ax[j]);
    dn[static_cast<std::size_t>(k)] = 2.0 * an[j] * an[l];
  }
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  InflatedReport out;
  const double nx2 = x.squaredNorm();
  for (int t = 0; t < 3; ++t) {
    const auto i = static_cast<std::size_t>(pairs[t][0]), j = static_cast<std::size_t>(pairs[t][1]);
    const double r = (lambda(pairs[t][0]) * dz[j] - lambda(pairs[t][1]) * dz[i]).norm();
    const double w = (std::abs(lambda(pairs[t][0])) * dn[j] + std::abs(lambda(pairs[t][1])) * dn[i]) * nx2;
    const double rel = w > 0 ? r / w : (r > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.residual[static_cast<std::size_t>(t)] = rel;
    out.pass[static_cast<std::size_t>(t)] = rel <= tol;
  }
  return out;
}

Extraction extract_eigenvector(const ProjectiveEigenvalue& lambda, const ComplexVector& y, const PencilProblem& p,
                               double tol, Scaling scaling) {
  if (y.norm() == 0.0) throw PreconditionError("extract_eigenvector: y = 0");
  const ComplexVector z = lift_deflated(y, p.n(), scaling);
  if (z.norm() > 0.0)
    if (auto x = symmetric_rank_one_factor(z, tol)) return {canonical_direction(*x), true};
  const ComplexDenseMatrix pen = p.pencil(lambda.lambda());
  const RealVector s = singular_values(pen);
  const double w = weighted_norm(p, lambda.lambda());
  const ComplexDenseMatrix null = nullspace_abs(pen, tol * std::max(w, 1e-300));
  if (null.cols() == 0)
    throw StaleEigenvalueError("extract_eigenvector: pencil has full column rank at the claimed eigenvalue (σ_min/scale = " +
                               std::to_string(s(s.size() - 1) / w) + ")");
  return {canonical_direction(null.col(null.cols() - 1)), false};
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const Triple& l) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << l(0) << ", " << l(1) << ", " << l(2) << ")";
  return os.str();
}

// λ with P(λ) x = 0 for fixed x: null space of [A0x A1x A2x].
struct LambdaSpace {
  ComplexDenseMatrix basis;  // 3 × dim
  ComplexVector normal;      // constraint when dim = 2
};

LambdaSpace lambda_space(const PencilProblem& p, const ComplexVector& x, double tol) {
  ComplexDenseMatrix mx(p.m(), 3);
  for (int i = 0; i < 3; ++i) mx.col(i) = p[i] * x / std::max(norm2(p[i]), 1e-300);
  mx /= x.norm();
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(mx, Eigen::ComputeFullV);
  Index r = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++r;
  LambdaSpace out;
  ComplexDenseMatrix v = svd.matrixV();
  // Columns were scaled by 1/‖Ai‖; undo it on the λ side.
  for (int i = 0; i < 3; ++i) v.row(i) /= std::max(norm2(p[i]), 1e-300);
  out.basis = v.rightCols(3 - r);
  if (out.basis.cols() == 2) {
    const ComplexVector a = out.basis.col(0), b = out.basis.col(1);
    out.normal = ComplexVector(3);
    out.normal << a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0);
    out.normal = canonical_direction(out.normal);
  }
  if (out.basis.cols() > 0) {
    Eigen::HouseholderQR<ComplexDenseMatrix> qr(out.basis);
    out.basis = qr.householderQ() * ComplexDenseMatrix::Identity(3, out.basis.cols());
  }
  return out;
}

std::string family_tag(const LambdaSpace& ls) {
  if (ls.basis.cols() == 3) return "all";
  for (int i = 0; i < 3; ++i)
    if (std::abs(std::abs(ls.normal(i)) - 1.0) < 1e-9) return "lambda" + std::to_string(i) + "=0";
  return "plane";
}

// Gauss-Newton on P(λ) x = 0 with λc fixed (c the largest entry) and x0ᴴ x = 1.
bool polish(const PencilProblem& p, Triple& lambda, ComplexVector& x) {
  const Index n = p.n(), m = p.m();
  Index c = 0;
  lambda.cwiseAbs().maxCoeff(&c);
  Triple lam = lambda / lambda(c);
  const ComplexVector x0 = x / x.norm();
  ComplexVector xv = x0;
  int free_idx[2], f = 0;
  for (int i = 0; i < 3; ++i)
    if (i != c) free_idx[f++] = i;
  const double scale = norm2(p.A0) + norm2(p.A1) + norm2(p.A2);
  double start = (p.pencil(lam) * xv).norm();
  for (int it = 0; it < 8; ++it) {
    ComplexDenseMatrix j(m + 1, n + 2);
    ComplexVector rhs(m + 1);
    j.setZero();
    j.block(0, 0, m, n) = p.pencil(lam);
    j.block(0, n, m, 1) = p[free_idx[0]] * xv;
    j.block(0, n + 1, m, 1) = p[free_idx[1]] * xv;
    j.block(m, 0, 1, n) = x0.adjoint();
    rhs.head(m) = -(p.pencil(lam) * xv);
    rhs(m) = 1.0 - x0.dot(xv);
    const ComplexVector step = j.colPivHouseholderQr().solve(rhs);
    xv += step.head(n);
    lam(free_idx[0]) += step(n);
    lam(free_idx[1]) += step(n + 1);
    if (step.norm() <= 1e-15 * (1.0 + xv.norm())) break;
  }
  const double end = (p.pencil(lam) * xv).norm();
  if (!std::isfinite(end) || end > start || end > 1e-6 * scale * xv.norm()) return false;
  if (ProjectiveEigenvalue::distance(lam, lambda) > 1e-3) return false;
  if (projective_distance(xv, x) > 1e-3) return false;
  lambda = lam;
  x = xv;
  return true;
}

struct Candidate {
  Triple lambda;
  ComplexDenseMatrix ybasis;  // deflated vectors (columns)
  bool continuum = false;
};

struct Family {
  ComplexVector x;
  LambdaSpace space;
};

class Driver {
public:
  Driver(const PencilProblem& p, const SolverConfig& cfg, Diagnostics& diag) : p_(p), cfg_(cfg), diag_(diag) {}

  void process(const Candidate& cand, std::vector<Solution>& out) {
    // Candidate eigenvectors: decomposable lifts first, null space of P(λ) last.
    std::vector<Extraction> xs;
    const Index d = cand.ybasis.cols();
    if (d == 1) {
      const ComplexVector z = lift_deflated(cand.ybasis.col(0), p_.n());
      if (z.norm() > 0)
        if (auto x = symmetric_rank_one_factor(z, cfg_.decomposable_tol)) xs.push_back({*x, true});
    }
    if (xs.empty() && d >= 1) {
      ComplexDenseMatrix lifted(p_.n() * p_.n(), d);
      for (Index c = 0; c < d; ++c) lifted.col(c) = lift_deflated(cand.ybasis.col(c), p_.n());
      auto members = decomposable_members(lifted, cfg_.decomposable_tol, derive_seed(cfg_.seed, 77 + counter_++),
                                          cfg_.decomposable_starts);
      std::stable_sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
        return relative_residual(p_, cand.lambda, a.x) < relative_residual(p_, cand.lambda, b.x);
      });
      for (auto& mbr : members) xs.push_back({mbr.x, true});
    }
    {
      const ComplexDenseMatrix pen = p_.pencil(cand.lambda);
      const ComplexDenseMatrix null =
          nullspace_abs(pen, cfg_.rank_tol * std::max(weighted_norm(p_, cand.lambda), 1e-300));
      if (null.cols() > 0) xs.push_back({null.col(null.cols() - 1), false});
    }

    for (const auto& ex : xs) {
      if (try_candidate(cand, ex, out)) return;
    }
    diag_.notes.push_back("dropped candidate " + fmt(cand.lambda) + ": no eigenvector passed verification");
  }

  std::vector<Family> families;

private:
  bool try_candidate(const Candidate& cand, const Extraction& ex, std::vector<Solution>& out) {
    ComplexVector x = canonical_direction(ex.x);
    const LambdaSpace ls = lambda_space(p_, x, cfg_.decomposable_tol);
    const Index dim = ls.basis.cols();
    if (dim == 0) return false;
    Solution s;
    s.decomposable = ex.decomposable;
    Triple lambda;
    if (dim == 1) {
      lambda = ls.basis.col(0);
      if (cfg_.refine) polish(p_, lambda, x);
    } else {
      s.continuum = true;
      s.family = family_tag(ls);
      const ComplexVector proj = ls.basis * (ls.basis.adjoint() * ComplexVector(cand.lambda));
      lambda = proj.norm() >= 0.5 * cand.lambda.norm() ? Triple(proj) : Triple(ls.basis.col(0));
    }
    x = canonical_direction(x);
    const VerifyReport vr = verify_solution(p_, lambda, x, cfg_.residual_tol);
    if (!vr.pass) {
      diag_.notes.push_back("rejected x at " + fmt(lambda) + ": residual " + std::to_string(vr.residual) +
                            ", sigma_min " + std::to_string(vr.sigma_min));
      return false;
    }
    s.lambda = ProjectiveEigenvalue(lambda);
    s.x = x;
    s.residual = vr.sigma_min;
    if (s.continuum) families.push_back({x, ls});
    out.push_back(std::move(s));
    return true;
  }

  const PencilProblem& p_;
  const SolverConfig& cfg_;
  Diagnostics& diag_;
  std::uint64_t counter_ = 0;
};

bool in_family(const Solution& s, const Family& f) {
  if (projective_distance(s.x, f.x) > 1e-6) return false;
  const ComplexVector l = s.lambda.lambda();
  const ComplexVector proj = f.space.basis * (f.space.basis.adjoint() * l);
  return (l - proj).norm() <= 1e-6 * l.norm();
}

std::vector<Solution> dedupe(std::vector<Solution> in, const std::vector<Family>& fams, double tol) {
  std::vector<Solution> out;
  // Families first so isolated members can be folded into them.
  std::stable_partition(in.begin(), in.end(), [](const Solution& s) { return s.continuum; });
  for (auto& s : in) {
    bool skip = false;
    for (const auto& o : out) {
      if (o.continuum && s.continuum) {
        if (projective_distance(o.x, s.x) <= 1e-6) skip = true;
      } else if (!o.continuum && !s.continuum) {
        if (o.lambda.distance(s.lambda) <= tol) skip = true;
      }
    }
    if (!s.continuum)
      for (const auto& f : fams)
        if (in_family(s, f)) skip = true;
    if (!skip) out.push_back(std::move(s));
  }
  return out;
}

bool solution_less(const Solution& a, const Solution& b) {
  if (a.continuum != b.continuum) return !a.continuum;
  for (int i = 0; i < 3; ++i) {
    const Complex u = a.lambda[i], v = b.lambda[i];
    if (std::abs(u.real() - v.real()) > 1e-9) return u.real() < v.real();
    if (std::abs(u.imag() - v.imag()) > 1e-9) return u.imag() < v.imag();
  }
  return false;
}

} // namespace

SolveReport solve(const ComplexDenseMatrix& a0, const ComplexDenseMatrix& a1, const ComplexDenseMatrix& a2,
                  const SolverConfig& cfg) {
  const auto t_start = Clock::now();
  SolveReport rep;
  rep.config = cfg;
  check_same_shape(a0, a1, a2);
  rep.m = a0.rows();
  rep.n = a0.cols();
  const PencilProblem original{a0, a1, a2, false};

  auto t0 = Clock::now();
  const NormalizedProblem np = normalize_problem(a0, a1, a2, cfg.rank_tol);
  const PencilProblem& p = np.problem;
  rep.diagnostics.timings["normalize"] = ms_since(t0);
  if (!np.identity)
    rep.diagnostics.notes.push_back("normalized " + shape_string(rep.m, rep.n) + " -> " + shape_string(p.m(), p.n()));

  t0 = Clock::now();
  const DeterminantTriple gamma = kronecker_determinants(p, Scaling::integer);
  rep.diagnostics.timings["gamma"] = ms_since(t0);

  std::vector<Candidate> candidates;
  bool generic = false;
  t0 = Clock::now();
  if (p.m() == p.n() + 1 && !cfg.force_simultaneous_path) {
    const auto comb = find_nonsingular_combination(gamma, derive_seed(cfg.seed, 1), cfg.combination_trials,
                                                   cfg.cond_threshold);
    if (comb) {
      rep.alpha_used = comb->alpha;
      rep.gamma_condition = comb->condition;
      const ComplexDenseMatrix g = comb->alpha(0) * gamma[0] + comb->alpha(1) * gamma[1] + comb->alpha(2) * gamma[2];
      const Eigen::PartialPivLU<ComplexDenseMatrix> lu(g);
      const ComplexDenseMatrix m0 = lu.solve(gamma[0]), m1 = lu.solve(gamma[1]), m2 = lu.solve(gamma[2]);
      const double comm_tol = std::max(1e-8 * comb->condition, 1e-12);
      try {
        for (const auto& jp : commuting_joint_eigs(m0, m1, m2, comm_tol, derive_seed(cfg.seed, 2)))
          candidates.push_back({jp.lambda, jp.y, false});
        generic = true;
      } catch (const PreconditionError& e) {
        rep.diagnostics.notes.push_back(std::string("generic path abandoned: ") + e.what());
      }
    } else {
      rep.diagnostics.notes.push_back("no nonsingular combination within " + std::to_string(cfg.combination_trials) +
                                      " trials (undetermined); using simultaneous pencils");
      rep.gamma_condition = std::numeric_limits<double>::infinity();
    }
  }
  if (!generic) {
    if (p.m() != p.n() + 1 || cfg.force_simultaneous_path) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 3; ++i) {
        const RealVector s = singular_values(gamma[i]);
        const double lo = s(s.size() - 1);
        best = std::min(best, lo > 0 ? s(0) / lo : std::numeric_limits<double>::infinity());
      }
      rep.gamma_condition = best;
    }
    for (const auto& ds : simultaneous_deflated_solutions(gamma, cfg.rank_tol, derive_seed(cfg.seed, 3), cfg.dedup_tol)) {
      candidates.push_back({ds.lambda.lambda(), ds.basis, ds.continuum});
      rep.diagnostics.notes.push_back("deflated candidate " + fmt(ds.lambda.lambda()) + " null dim " +
                                      std::to_string(ds.basis.cols()) + (ds.continuum ? " (family)" : ""));
    }
  }
  rep.path = generic ? SolvePath::generic_commuting : SolvePath::simultaneous_pencils;
  rep.diagnostics.timings["deflated"] = ms_since(t0);

  t0 = Clock::now();
  std::vector<Solution> reduced;
  Driver drv(p, cfg, rep.diagnostics);
  for (const auto& c : candidates) {
    try {
      drv.process(c, reduced);
    } catch (const StaleEigenvalueError& e) {
      rep.diagnostics.notes.push_back(e.what());
    }
  }
  reduced = dedupe(std::move(reduced), drv.families, cfg.dedup_tol);
  rep.diagnostics.timings["extract"] = ms_since(t0);

  // Back to the caller's coordinates.
  for (auto& s : reduced) {
    ComplexVector x = canonical_direction(np.right_map * s.x);
    const VerifyReport vr = verify_solution(original, s.lambda.lambda(), x, cfg.residual_tol);
    if (!vr.pass) {
      rep.diagnostics.notes.push_back("lifted solution " + fmt(s.lambda.lambda()) + " failed verification");
      continue;
    }
    s.x = x;
    s.residual = vr.sigma_min;
    rep.solutions.push_back(std::move(s));
  }
  // Common null vectors of A0, A1, A2 solve the problem for every λ.
  for (Index c = 0; c < np.common_null.cols(); ++c) {
    Solution s;
    s.lambda = ProjectiveEigenvalue(Triple(1, 0, 0));
    s.x = canonical_direction(np.common_null.col(c));
    s.residual = verify_solution(original, s.lambda.lambda(), s.x, cfg.residual_tol).sigma_min;
    s.continuum = true;
    s.family = "all";
    s.decomposable = true;
    rep.solutions.push_back(std::move(s));
  }
  std::stable_sort(rep.solutions.begin(), rep.solutions.end(), solution_less);

  if (rep.solutions.empty()) {
    if (p.m() == p.n() + 1)
      throw InternalError("no solution found for an m = n+1 problem, where existence is guaranteed");
    rep.path = SolvePath::no_solution;
  }
  rep.diagnostics.timings["total"] = ms_since(t_start);
  return rep;
}

} // namespace mpencil
