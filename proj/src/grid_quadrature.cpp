#include "fraclap/grid_quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "fraclap/error.hpp"
#include "fraclap/hermite.hpp"

namespace fraclap {

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix (diag d, sub-diag e,
// e[0] unused). On return d holds eigenvalues, z the eigenvectors (columns).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<std::vector<double>>& z) {
  const int n = static_cast<int>(d.size());
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  if (n > 0) e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (++iter > 60)
          throw NumericalError("gauss_hermite: QL did not converge for eigenvalue " +
                               std::to_string(l) + " after 60 iterations");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k][i + 1];
            z[k][i + 1] = s * z[k][i] + c * f;
            z[k][i] = c * z[k][i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

double lagrange(std::span<const double> nodes, std::size_t k, double x) {
  double p = 1.0;
  for (std::size_t j = 0; j < nodes.size(); ++j)
    if (j != k) p *= (x - nodes[j]) / (nodes[k] - nodes[j]);
  return p;
}

}  // namespace

GaussHermiteRule gauss_hermite(int count) {
  if (count < 1) throw ValidationError("gauss_hermite: count must be >= 1");
  std::vector<double> d(count, 0.0), e(count, 0.0);
  for (int k = 1; k < count; ++k) e[k] = std::sqrt(static_cast<double>(k));
  std::vector<std::vector<double>> z(count, std::vector<double>(count, 0.0));
  for (int i = 0; i < count; ++i) z[i][i] = 1.0;
  tridiag_ql(d, e, z);

  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
  GaussHermiteRule rule;
  for (int i : order) {
    rule.nodes.push_back(d[i]);
    rule.weights.push_back(z[0][i] * z[0][i]);
  }
  // the spectrum is symmetric; enforce it exactly
  for (int i = 0; i < count / 2; ++i) {
    const double x = 0.5 * (rule.nodes[count - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[count - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

std::vector<double> grid_weights_on_nodes(std::span<const int> nodes, double a) {
  if (!(a > 0)) throw ValidationError("grid weights: scale a must be positive");
  if (nodes.empty() || std::find(nodes.begin(), nodes.end(), 0) == nodes.end())
    throw ValidationError("grid weights: node set must contain 0");
  std::vector<double> full;
  for (int s : nodes) {
    if (s < 0) throw ValidationError("grid weights: negative node offset");
    full.push_back(s);
    if (s != 0) full.push_back(-s);
  }
  std::sort(full.begin(), full.end());
  if (std::adjacent_find(full.begin(), full.end()) != full.end())
    throw ValidationError("grid weights: duplicate node offset");

  const auto gh = gauss_hermite(static_cast<int>(nodes.size()));
  std::vector<double> w;
  for (int s : nodes) {
    const auto k = static_cast<std::size_t>(
        std::lower_bound(full.begin(), full.end(), double(s)) - full.begin());
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i)
      acc += gh.weights[i] * lagrange(full, k, gh.nodes[i] / a);
    if (!std::isfinite(acc))
      throw NumericalError("grid weights: Lagrange evaluation overflowed (a too small)");
    w.push_back(acc);
  }
  return w;
}

GridQuadrature1D grid_weights_1d(int n_q, double a) {
  if (n_q < 0) throw ValidationError("grid_weights_1d: negative n_q");
  std::vector<int> nodes(n_q + 1);
  std::iota(nodes.begin(), nodes.end(), 0);
  return {n_q, a, grid_weights_on_nodes(nodes, a)};
}

double solve_elimination_scale(int n_q) {
  if (n_q < 2 || n_q % 2 != 0)
    throw ValidationError("solve_elimination_scale: n_q must be even and positive, got " +
                          std::to_string(n_q));
  auto f = [n_q](double a) { return grid_weights_1d(n_q, a).w.back(); };
  const double lo = 0.5, hi = 3.0, step = 0.05;
  double x0 = lo, f0 = f(x0);
  for (int i = 1; x0 < hi - 1e-12; ++i) {
    const double x1 = std::min(lo + i * step, hi);
    const double f1 = f(x1);
    if (f1 == 0.0) return x1;
    if ((f0 < 0) != (f1 < 0)) {
      std::uintmax_t it = 200;
      auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-15 * std::abs(u); };
      const auto [ra, rb] = boost::math::tools::toms748_solve(f, x0, x1, f0, f1, tol, it);
      return 0.5 * (ra + rb);
    }
    x0 = x1;
    f0 = f1;
  }
  throw NumericalError("solve_elimination_scale: no sign change of w_" + std::to_string(n_q) +
                       "(a) for a in [0.5, 3.0]");
}

OrthogonalityResidual verify_orthogonality_1d(const GridQuadrature1D& rule) {
  const int n = rule.n_q;
  std::vector<std::vector<double>> he;
  for (int k = 0; k <= n; ++k) he.push_back(hermite_values(k * rule.a, n).values);
  OrthogonalityResidual res;
  std::vector<double> fact(n + 1, 1.0);
  for (int p = 1; p <= n; ++p) fact[p] = fact[p - 1] * p;
  for (int p = 0; p <= n; ++p) {
    for (int m = 0; m <= p; ++m) {
      double s = rule.w[0] * he[0][m] * he[0][p];
      // node -k contributes He_m(-x)He_p(-x) = (-1)^{m+p} He_m He_p
      const double mirror = ((m + p) % 2 == 0) ? 2.0 : 0.0;
      for (int k = 1; k <= n; ++k) s += mirror * rule.w[k] * he[k][m] * he[k][p];
      // relative to the norms ||He_m|| ||He_p|| = sqrt(m! p!)
      if (m == p)
        res.moment = std::max(res.moment, std::abs(s - fact[p]) / fact[p]);
      else
        res.cross = std::max(res.cross, std::abs(s) / std::sqrt(fact[m] * fact[p]));
    }
  }
  return res;
}

}  // namespace fraclap
