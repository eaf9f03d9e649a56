#include "fraclap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "fraclap/error.hpp"

namespace fraclap {

using std::numbers::pi;

CosineRule fft_rule(int N, int n_max) {
  if (N < 1) throw ValidationError("fft_rule: N must be >= 1");
  CosineRule r;
  r.U.resize(n_max + 1, N + 1);
  for (int j = 0; j <= N; ++j) r.nodes.push_back(j * pi / N);
  for (int n = 0; n <= n_max; ++n)
    for (int j = 0; j <= N; ++j) {
      const double w = (j == 0 || j == N) ? 0.5 * pi / N : pi / N;
      // cos(n j pi / N) with the argument reduced exactly
      const long t = (static_cast<long>(n) * j) % (2L * N);
      r.U(n, j) = w * std::cos(t * pi / N);
    }
  return r;
}

std::vector<double> fft_inverse_dtft(const std::vector<double>& samples, double alpha) {
  if (samples.empty() || samples.size() % 2 != 0)
    throw ValidationError("fft_inverse_dtft: need 2N samples");
  const long M = static_cast<long>(samples.size());
  const long N = M / 2;
  std::vector<double> F(M);
  for (long j = 0; j < M; ++j) F[j] = std::pow(std::abs(samples[j]), 0.5 * alpha);
  std::vector<double> h(N + 1);
  for (long n = 0; n <= N; ++n) {
    double s = 0.0;
    for (long j = 0; j < M; ++j) s += F[j] * std::cos(((n * j) % M) * pi / N);
    h[n] = -s / M;
  }
  return h;
}

double ts_psi_prime(double x) {
  const double u = 0.5 * pi * std::sinh(std::abs(x));
  const double e = std::exp(-2.0 * u);
  return 0.5 * pi * std::cosh(x) * 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double ts_one_minus_psi(double x) {
  const double u = 0.5 * pi * std::sinh(x);
  const double e = std::exp(-2.0 * u);
  return 2.0 * e / (1.0 + e);
}

namespace {

// log psi'(x) without overflow
double log_psi_prime(double x) {
  const double u = 0.5 * pi * std::sinh(std::abs(x));
  const double ax = std::abs(x);
  const double log_cosh = ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
  return std::log(0.5 * pi) + log_cosh + std::log(4.0) - 2.0 * u -
         2.0 * std::log1p(std::exp(-2.0 * u));
}

// log of width * (1 - psi(x)) / 2 for x >= 0, i.e. distance from the nearer endpoint
double log_gap(double x, double width) {
  const double u = 0.5 * pi * std::sinh(x);
  return std::log(width) - 2.0 * u - std::log1p(std::exp(-2.0 * u));
}

double log_sin_half(double log_w) {
  if (log_w < std::log(1e-4)) return log_w - std::log(2.0);
  return std::log(std::sin(0.5 * std::exp(log_w)));
}

// Solve logR(x) = log eps for x > 0, logR decreasing; start from guess.
double refine(const std::function<double(double)>& logR, double log_eps, double guess) {
  auto f = [&](double x) { return logR(x) - log_eps; };
  double lo = std::max(0.05, std::isfinite(guess) ? 0.8 * guess : 1.0);
  double hi = std::isfinite(guess) ? std::max(1.25 * guess, lo + 0.1) : 2.0;
  while (f(lo) < 0 && lo > 1e-3) lo *= 0.5;
  while (f(hi) > 0 && hi < 20) hi *= 1.5;
  if (f(lo) < 0 || f(hi) > 0)
    throw NumericalError(fmt::format("tanhsinh_endpoint: no bracket in [{}, {}]", lo, hi));
  std::uintmax_t it = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) < 1e-13; };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
  return 0.5 * (a + b);
}

double safe_log_guess(double arg) { return arg > 1.0 ? std::log(arg) : 1.0; }

}  // namespace

EndpointEstimate tanhsinh_endpoint(double alpha, double eps, EndpointMode mode, double h_g,
                                   int n_t) {
  if (!(alpha >= 0 && alpha <= 2)) throw ValidationError("tanhsinh_endpoint: alpha in [0, 2]");
  if (!(eps > 0 && eps < 1)) throw ValidationError("tanhsinh_endpoint: eps in (0, 1)");
  const double le = std::log(eps);
  const double lp0 = log_psi_prime(0.0);
  EndpointEstimate est;
  if (mode == EndpointMode::symmetric) {
    est.guess = safe_log_guess(-2.0 * (le - alpha * std::log(pi)) / (pi * (alpha + 1.0)));
    // integrand |2 sin(w/2)|^alpha relative to its value at w = pi
    auto logR = [&](double x) {
      return log_psi_prime(x) - lp0 + alpha * log_sin_half(log_gap(x, 2.0 * pi));
    };
    est.x_star = refine(logR, le, est.guess);
    return est;
  }
  if (!(h_g > 0 && h_g < pi)) throw ValidationError("tanhsinh_endpoint: h_g in (0, pi)");
  if (n_t < 1) throw ValidationError("tanhsinh_endpoint: n_t must be >= 1");
  const double mid = std::log(std::sin(0.25 * h_g));
  est.guess = safe_log_guess(-(2.0 / pi) * (le + alpha * std::log(std::sin(0.5 * h_g) / std::sin(h_g))));
  est.guess_neg = safe_log_guess(-(2.0 / (pi * (alpha + 1.0))) *
                                 (le + alpha * std::log(std::sin(0.5 * h_g) / pi)));
  auto logRpos = [&](double x) {
    const double w = h_g - std::exp(log_gap(x, h_g));
    return log_psi_prime(x) - lp0 + alpha * (std::log(std::sin(0.5 * w)) - mid);
  };
  auto logRneg = [&](double x) {
    return log_psi_prime(x) - lp0 + alpha * (log_sin_half(log_gap(x, h_g)) - mid);
  };
  est.x_star = refine(logRpos, le, est.guess);
  est.x_star_neg = refine(logRneg, le, est.guess_neg);
  est.n_l = static_cast<int>(std::ceil(n_t * est.x_star_neg / est.x_star - 1e-12));
  return est;
}

TanhSinhGrid tanhsinh_grid(double alpha, int n_t, double eps) {
  if (n_t < 1) throw ValidationError("tanhsinh_grid: n_t must be >= 1");
  TanhSinhGrid g;
  g.n_t = n_t;
  g.lo = 0.0;
  g.hi = pi;
  g.endpoint = tanhsinh_endpoint(alpha, eps, EndpointMode::symmetric);
  g.h_e = g.endpoint.x_star / n_t;
  for (int k = n_t; k >= 1; --k) {
    const double x = k * g.h_e;
    g.nodes.push_back(pi * ts_one_minus_psi(x));
    g.weights.push_back(g.h_e * pi * ts_psi_prime(x));
  }
  g.nodes.push_back(pi);
  g.weights.push_back(g.h_e * pi * pi / 4.0);
  return g;
}

TanhSinhGrid tanhsinh_grid_interval(double alpha, double h_g, int n_t, double eps) {
  TanhSinhGrid g;
  g.n_t = n_t;
  g.lo = 0.0;
  g.hi = h_g;
  g.endpoint = tanhsinh_endpoint(alpha, eps, EndpointMode::asymmetric, h_g, n_t);
  g.n_l = g.endpoint.n_l;
  g.h_e = g.endpoint.x_star / n_t;
  for (int k = -g.n_l; k <= n_t; ++k) {
    const double x = k * g.h_e;
    const double gap = 0.5 * h_g * ts_one_minus_psi(std::abs(x));
    g.nodes.push_back(k < 0 ? gap : h_g - gap);
    g.weights.push_back(g.h_e * 0.5 * h_g * ts_psi_prime(x));
  }
  return g;
}

CosineRule cosine_rule(const TanhSinhGrid& g, int n_max) {
  CosineRule r;
  r.nodes = g.nodes;
  r.U.resize(n_max + 1, static_cast<Eigen::Index>(g.nodes.size()));
  for (int n = 0; n <= n_max; ++n)
    for (std::size_t p = 0; p < g.nodes.size(); ++p)
      r.U(n, p) = g.weights[p] * std::cos(n * g.nodes[p]);
  return r;
}

double tanhsinh_coefficient(const Symbol1D& symbol, double alpha, int n, const TanhSinhGrid& g) {
  double s = 0.0;
  for (std::size_t p = 0; p < g.nodes.size(); ++p)
    s += g.weights[p] * std::cos(n * g.nodes[p]) *
         std::pow(std::abs(symbol(g.nodes[p])), 0.5 * alpha);
  return -s / pi;
}

std::vector<double> filon_moments(int n, double c, double s, int kmax) {
  std::vector<double> J(kmax + 1, 0.0);
  if (n == 0) {
    for (int k = 0; k <= kmax; k += 2) J[k] = 2.0 * std::pow(s, k + 1) / (k + 1);
    return J;
  }
  const double ns = n * s;
  if (ns < 4.0) {
    // forward recurrence loses ~(k/ns)^2 per step here; expand about the centre
    const double cc = std::cos(n * c), sc = std::sin(n * c);
    for (int k = 0; k <= kmax; ++k) {
      const bool even = k % 2 == 0;
      double acc = 0.0;
      double a = even ? 1.0 : ns;  // (ns)^p / p!, p = 2j or 2j+1
      int p = even ? 0 : 1;
      for (int j = 0; j < 80; ++j) {
        const double t = a * 2.0 * std::pow(s, k + 1) / (p + k + 1);
        acc += (j % 2 == 0) ? t : -t;
        if (j > 2 && std::abs(t) < 1e-18 * std::abs(acc)) break;
        a *= ns * ns / ((p + 1.0) * (p + 2.0));
        p += 2;
      }
      J[k] = even ? cc * acc : -sc * acc;
    }
    return J;
  }
  const double a = c - s, b = c + s;
  const double sa = std::sin(n * a), sb = std::sin(n * b);
  const double ca = std::cos(n * a), cb = std::cos(n * b);
  J[0] = (sb - sa) / n;
  if (kmax >= 1) J[1] = s * (sb + sa) / n + (cb - ca) / (double(n) * n);
  for (int k = 2; k <= kmax; ++k) {
    const double sk = std::pow(s, k), sk1 = std::pow(s, k - 1);
    const double msk = (k % 2 == 0) ? sk : -sk, msk1 = (k % 2 == 0) ? -sk1 : sk1;
    J[k] = (sk * sb - msk * sa + (double(k) / n) * (sk1 * cb - msk1 * ca - (k - 1) * J[k - 2])) / n;
  }
  return J;
}

FilonRegion filon_region(const FilonPlan& plan, int n, int m) {
  FilonRegion r;
  const double h = plan.h;
  r.a = (plan.k_g + plan.q * m) * h;
  r.b = r.a + plan.q * h;
  r.c = 0.5 * (r.a + r.b);
  const auto J = filon_moments(n, r.c, 0.5 * plan.q * h, plan.n_f);
  Eigen::VectorXd Js(plan.n_f + 1);
  for (int k = 0; k <= plan.n_f; ++k) Js(k) = J[k] / std::pow(h, k);
  const Eigen::VectorXd b = plan.Vinv * Js;
  const int first = plan.k_g + plan.q * m + (plan.q - plan.n_f) / 2;
  for (int j = 0; j <= plan.n_f; ++j) {
    r.index.push_back(first + j);
    r.weight.push_back(b(j));
  }
  return r;
}

FilonPlan filon_plan(int N, int k_g, int n_f, int n_max) {
  if (N < 1) throw ValidationError("filon_plan: N must be >= 1");
  if (n_f < 1) throw ValidationError("filon_plan: n_f must be >= 1");
  if (n_f > 10)
    throw ValidationError(fmt::format(
        "filon_plan: n_f={} gives an ill-conditioned Vandermonde system; use n_f <= 10", n_f));
  FilonPlan p;
  p.N = N;
  p.k_g = k_g;
  p.n_f = n_f;
  p.q = n_f % 2 == 0 ? 2 : 1;
  p.n_max = n_max;
  p.h = pi / N;
  p.h_g = k_g * p.h;
  if (k_g < 0 || k_g >= N || (N - k_g) % p.q != 0)
    throw ValidationError(fmt::format(
        "filon_plan: N - k_g = {} must be a positive multiple of q = {}", N - k_g, p.q));
  if (n_f / 2 > N) throw ValidationError("filon_plan: n_f too large for the grid");
  // mirroring across w = 0 would interpolate through the branch point
  if (k_g < min_kg(n_f))
    throw ValidationError(
        fmt::format("filon_plan: k_g={} lets n_f={} nodes cross w = 0; need k_g >= {}", k_g, n_f,
                    min_kg(n_f)));

  Eigen::MatrixXd V(n_f + 1, n_f + 1);
  for (int k = 0; k <= n_f; ++k)
    for (int j = 0; j <= n_f; ++j) V(k, j) = std::pow(j - 0.5 * n_f, k);
  p.Vinv = V.fullPivLu().inverse();

  p.rule.U = Eigen::MatrixXd::Zero(n_max + 1, N + 1);
  for (int j = 0; j <= N; ++j) p.rule.nodes.push_back(j * p.h);
  auto mirror = [N](int j) { return j < 0 ? -j : (j > N ? 2 * N - j : j); };
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m < p.regions(); ++m) {
      const auto r = filon_region(p, n, m);
      for (int j = 0; j <= n_f; ++j) p.rule.U(n, mirror(r.index[j])) += r.weight[j];
    }
  return p;
}

int min_kg(int n_f) {
  const int q = n_f % 2 == 0 ? 2 : 1;
  return std::max(1, (n_f - q) / 2);
}

int default_kg(int N, int n_f) {
  const int q = n_f % 2 == 0 ? 2 : 1;
  int k = std::max(min_kg(n_f), static_cast<int>(std::lround(N / 4.0)));
  while ((N - k) % q != 0) ++k;
  return k;
}

int default_nf(int n_q, int n_c) { return 2 * std::max(n_q - 2 - n_c + 1, n_c); }

CosineRule composite_rule(const FilonPlan& plan, const TanhSinhGrid& ts) {
  if (std::abs(ts.hi - plan.h_g) > 1e-14)
    throw ValidationError("composite_rule: tanh-sinh interval does not end at h_g");
  const auto tr = cosine_rule(ts, plan.n_max);
  CosineRule r;
  r.nodes = tr.nodes;
  r.nodes.insert(r.nodes.end(), plan.rule.nodes.begin(), plan.rule.nodes.end());
  r.U.resize(plan.n_max + 1, static_cast<Eigen::Index>(r.nodes.size()));
  r.U << tr.U, plan.rule.U;
  return r;
}

double composite_coefficient(const Symbol1D& symbol, double alpha, int n, const FilonPlan& plan,
                             const TanhSinhGrid& ts) {
  if (n < 0 || n > plan.n_max) throw ValidationError("composite_coefficient: n out of plan range");
  double s = 0.0;
  for (std::size_t p = 0; p < ts.nodes.size(); ++p)
    s += ts.weights[p] * std::cos(n * ts.nodes[p]) *
         std::pow(std::abs(symbol(ts.nodes[p])), 0.5 * alpha);
  for (int j = 0; j <= plan.N; ++j)
    s += plan.rule.U(n, j) * std::pow(std::abs(symbol(plan.rule.nodes[j])), 0.5 * alpha);
  return -s / pi;
}

std::vector<double> apply_rule_1d(const CosineRule& r, const Symbol1D& symbol, double alpha) {
  Eigen::VectorXd F(static_cast<Eigen::Index>(r.nodes.size()));
  for (std::size_t p = 0; p < r.nodes.size(); ++p)
    F(p) = std::pow(std::abs(symbol(r.nodes[p])), 0.5 * alpha);
  const Eigen::VectorXd h = -(r.U * F) / pi;
  return {h.data(), h.data() + h.size()};
}

Eigen::MatrixXd apply_rule_2d(const CosineRule& r,
                              const std::function<double(double, double)>& symbol, double alpha) {
  const auto K = static_cast<Eigen::Index>(r.nodes.size());
  Eigen::MatrixXd F(K, K);
  for (Eigen::Index p = 0; p < K; ++p)
    for (Eigen::Index q = 0; q <= p; ++q)
      F(p, q) = F(q, p) = std::pow(std::abs(symbol(r.nodes[p], r.nodes[q])), 0.5 * alpha);
  // first axis then second: O(M K^2 + M^2 K)
  const Eigen::MatrixXd T = r.U * F;
  return -(T * r.U.transpose()) / (pi * pi);
}

std::string IntegratorConfig::describe() const {
  switch (method) {
    case Integrator::fft: return "fft";
    case Integrator::tanh_sinh: return fmt::format("tanh-sinh(nt={},eps={:g})", n_t, eps);
    case Integrator::filon:
      return fmt::format("filon(kg={},nf={},nt={},eps={:g})", k_g, n_f, n_t, eps);
  }
  return "?";
}

Integrator parse_integrator(const std::string& s) {
  if (s == "fft") return Integrator::fft;
  if (s == "tanh-sinh" || s == "tanhsinh") return Integrator::tanh_sinh;
  if (s == "filon") return Integrator::filon;
  throw ValidationError("unknown integrator '" + s + "'");
}

}  // namespace fraclap
