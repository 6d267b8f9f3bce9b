#include "mpencil/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace mpencil::oracle {

namespace {

using SmallPencil = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, max_m, max_n>;
using SmallGram = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, max_n, max_n>;

struct Chart {
  int fixed, u, v;
};

Chart chart_axes(int c) { return {c, (c + 1) % 3, (c + 2) % 3}; }

Triple chart_point(const Chart& ch, Complex u, Complex v) {
  Triple l;
  l(ch.fixed) = 1.0;
  l(ch.u) = u;
  l(ch.v) = v;
  return l;
}

double coord(int grid, int i) { return grid == 1 ? 0.0 : -1.0 + 2.0 * i / (grid - 1); }

// σ_min from the smallest eigenvalue of the Gram matrix; precise to ~sqrt(ε),
// which is plenty for locating minima.
double sigma_min_fast(const PencilProblem& p, const Triple& l) {
  const SmallPencil pen = l(0) * p.A0 + l(1) * p.A1 + l(2) * p.A2;
  const SmallGram g = pen.adjoint() * pen;
  Eigen::SelfAdjointEigenSolver<SmallGram> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(0)));
}

double sample(const PencilProblem& p, const Chart& ch, int grid, Index idx) {
  const int g = grid;
  const int d = static_cast<int>(idx % g), c = static_cast<int>((idx / g) % g);
  const int b = static_cast<int>((idx / g / g) % g), a = static_cast<int>(idx / g / g / g);
  const Triple l = chart_point(ch, {coord(g, a), coord(g, b)}, {coord(g, c), coord(g, d)});
  return sigma_min_fast(p, l) / l.norm();
}

void check_limits(const PencilProblem& p) {
  if (p.n() > max_n || p.m() > max_m || p.n() < 1)
    throw ShapeError("oracle supports n <= " + std::to_string(max_n) + ", m <= " + std::to_string(max_m) + "; got " +
                     shape_string(p.m(), p.n()));
}

ComplexVector canonical(const ComplexVector& v) {
  ComplexVector u = v / v.norm();
  Index k = 0;
  double best = -1;
  for (Index i = 0; i < u.size(); ++i)
    if (std::abs(u(i)) > best * (1 + 1e-10)) {
      best = std::abs(u(i));
      k = i;
    }
  return u * (std::conj(u(k)) / std::abs(u(k)));
}

double sine(const ComplexVector& a, const ComplexVector& b) {
  const ComplexVector ua = a / a.norm(), ub = b / b.norm();
  return std::min(1.0, (ub - ua * ua.dot(ub)).norm());
}

struct Refined {
  Triple lambda;
  ComplexVector x;
  double residual;
  bool ok;
};

Refined refine(const PencilProblem& p, const Chart& ch, Complex u, Complex v, const Config& cfg) {
  const Index m = p.m(), n = p.n();
  const double na[3] = {p.A0.norm(), p.A1.norm(), p.A2.norm()};
  Triple l = chart_point(ch, u, v);
  Eigen::JacobiSVD<ComplexDenseMatrix> svd(p.pencil(l), Eigen::ComputeFullV);
  ComplexVector x = svd.matrixV().col(n - 1);
  ComplexVector x0 = x;
  for (int it = 0; it < cfg.refine_iters; ++it) {
    ComplexDenseMatrix j = ComplexDenseMatrix::Zero(m + 1, n + 2);
    ComplexVector f(m + 1);
    const ComplexDenseMatrix pen = p.pencil(l);
    j.topLeftCorner(m, n) = pen;
    j.block(0, n, m, 1) = p[ch.u] * x;
    j.block(0, n + 1, m, 1) = p[ch.v] * x;
    j.block(m, 0, 1, n) = x0.adjoint();
    f.head(m) = pen * x;
    f(m) = x0.dot(x) - 1.0;
    const ComplexVector dx = j.colPivHouseholderQr().solve(-f);
    x += dx.head(n);
    l(ch.u) += dx(n);
    l(ch.v) += dx(n + 1);
    if (!std::isfinite(dx.norm())) return {l, x, 1.0, false};
    if (dx.norm() <= 1e-14 * (1.0 + x.norm() + l.norm())) break;
  }
  const double w = std::abs(l(0)) * na[0] + std::abs(l(1)) * na[1] + std::abs(l(2)) * na[2];
  const double res = (p.pencil(l) * x).norm() / (w * x.norm());
  Eigen::JacobiSVD<ComplexDenseMatrix> check(p.pencil(l));
  const double smin = check.singularValues()(n - 1) / w;
  return {l, x, smin, std::isfinite(res) && res <= cfg.accept_tol && smin <= cfg.sigma_tol};
}

std::vector<double> scan(const PencilProblem& p, int chart, int grid, bool parallel) {
  check_limits(p);
  const Chart ch = chart_axes(chart);
  const Index total = static_cast<Index>(grid) * grid * grid * grid;
  std::vector<double> out(static_cast<std::size_t>(total));
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < total; ++i) out[static_cast<std::size_t>(i)] = sample(p, ch, grid, i);
  } else {
    for (Index i = 0; i < total; ++i) out[static_cast<std::size_t>(i)] = sample(p, ch, grid, i);
  }
  return out;
}

} // namespace

std::vector<double> scan_chart_serial(const PencilProblem& p, int chart, int grid) {
  return scan(p, chart, grid, false);
}

std::vector<double> scan_chart_parallel(const PencilProblem& p, int chart, int grid) {
  return scan(p, chart, grid, true);
}

std::vector<Root> solve(const PencilProblem& p, const Config& cfg) {
  check_limits(p);
  const int g = cfg.grid;
  const double na[3] = {p.A0.norm(), p.A1.norm(), p.A2.norm()};
  std::vector<Root> roots;
  for (int chart = 0; chart < 3; ++chart) {
    const Chart ch = chart_axes(chart);
    const std::vector<double> f = scan(p, chart, g, cfg.parallel);
    const double scale = std::max({na[0], na[1], na[2], 1e-300});

    // 4-d local minima over the 80-neighbourhood.
    std::vector<Index> minima;
    for (int a = 0; a < g; ++a)
      for (int b = 0; b < g; ++b)
        for (int c = 0; c < g; ++c)
          for (int d = 0; d < g; ++d) {
            const Index idx = ((static_cast<Index>(a) * g + b) * g + c) * g + d;
            const double here = f[static_cast<std::size_t>(idx)];
            bool is_min = true;
            for (int da = -1; da <= 1 && is_min; ++da)
              for (int db = -1; db <= 1 && is_min; ++db)
                for (int dc = -1; dc <= 1 && is_min; ++dc)
                  for (int dd = -1; dd <= 1 && is_min; ++dd) {
                    if (!da && !db && !dc && !dd) continue;
                    const int aa = a + da, bb = b + db, cc = c + dc, ee = d + dd;
                    if (aa < 0 || bb < 0 || cc < 0 || ee < 0 || aa >= g || bb >= g || cc >= g || ee >= g) continue;
                    const Index j = ((static_cast<Index>(aa) * g + bb) * g + cc) * g + ee;
                    if (f[static_cast<std::size_t>(j)] < here) is_min = false;
                  }
            if (is_min && here < 0.5 * scale) minima.push_back(idx);
          }
    auto lower = [&](Index i, Index j) { return f[static_cast<std::size_t>(i)] < f[static_cast<std::size_t>(j)]; };
    std::sort(minima.begin(), minima.end(), lower);
    if (static_cast<int>(minima.size()) > cfg.max_starts) minima.resize(static_cast<std::size_t>(cfg.max_starts));

    // Nearby roots can share one grid basin; the lowest samples catch the second one.
    std::vector<Index> order(f.size());
    std::iota(order.begin(), order.end(), Index{0});
    const auto low = std::min(order.size(), static_cast<std::size_t>(std::max(0, cfg.low_starts)));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(low), order.end(), lower);
    for (std::size_t i = 0; i < low; ++i)
      if (std::find(minima.begin(), minima.end(), order[i]) == minima.end()) minima.push_back(order[i]);

    for (Index idx : minima) {
      const int d = static_cast<int>(idx % g), c = static_cast<int>((idx / g) % g);
      const int b = static_cast<int>((idx / g / g) % g), a = static_cast<int>(idx / g / g / g);
      const Refined r = refine(p, ch, {coord(g, a), coord(g, b)}, {coord(g, c), coord(g, d)}, cfg);
      if (!r.ok) continue;
      const ComplexVector l = canonical(ComplexVector(r.lambda));
      bool dup = false;
      for (const auto& s : roots)
        if (sine(ComplexVector(s.lambda), l) <= cfg.dedup_tol) dup = true;
      if (!dup) roots.push_back({Triple(l), canonical(r.x), r.residual});
    }
  }
  return roots;
}

} // namespace mpencil::oracle
