#include "fraclap/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "fraclap/error.hpp"

namespace fraclap {

using std::numbers::pi;

double closed_form_1d(double alpha, int n) {
  if (!(alpha > 0 && alpha <= 2)) throw ValidationError("closed_form_1d: alpha in (0, 2]");
  n = std::abs(n);
  // 1/Gamma(x1) with x1 = alpha/2 - n + 1 <= 1 possibly negative: reflection
  // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
  const double x1 = 0.5 * alpha - n + 1.0;
  const double x2 = 0.5 * alpha + n + 1.0;
  if (x1 <= 0 && x1 == std::floor(x1)) return 0.0;
  double log_mag = std::lgamma(alpha + 1.0) - std::lgamma(x2);
  double sign = (n % 2 == 0) ? -1.0 : 1.0;
  if (x1 < 0.5) {
    const double sn = std::sin(pi * x1);
    if (sn == 0.0) return 0.0;
    log_mag += std::lgamma(1.0 - x1) + std::log(std::abs(sn) / pi);
    if (sn < 0) sign = -sign;
  } else {
    log_mag -= std::lgamma(x1);
  }
  return sign * std::exp(log_mag);
}

double aliasing_error_1d(double alpha, int N) {
  if (N < 1) throw ValidationError("aliasing_error_1d: N must be >= 1");
  // sum_k h_{n+2Nk} is exactly the 2N-point trapezoid value of the exact
  // symbol (2|sin(w/2)|)^alpha, so the k != 0 tail is trapezoid - closed form.
  std::vector<double> samples(2 * N);
  for (int j = 0; j < 2 * N; ++j) {
    const double s = 2.0 * std::sin(0.5 * j * pi / N);
    samples[j] = -s * s;
  }
  const auto ht = fft_inverse_dtft(samples, alpha);
  double sum = 0.0;
  for (int n = -N; n <= N; ++n) sum += ht[std::abs(n)] - closed_form_1d(alpha, n);
  return std::pow(static_cast<double>(N), alpha) * sum;
}

namespace {

int base_halfwidth_ok(const Stencil& base, int N) {
  if (base.meta.kind != OrderKind::integer)
    throw ValidationError("build_fractional: base must be an integer Laplacian stencil");
  if (N < base.half)
    throw ValidationError(fmt::format("build_fractional: N={} below base half-width {}", N,
                                      base.half));
  double sum = 0.0, mag = 0.0;
  for (double c : base.c) {
    sum += c;
    mag += std::abs(c);
  }
  if (std::abs(sum) > 1e-10 * mag)
    throw ValidationError("build_fractional: base stencil is not zero-sum");
  return base.half;
}

}  // namespace

Stencil build_fractional(const Stencil& base, double alpha, int N, IntegratorConfig cfg) {
  if (!(alpha > 0 && alpha <= 2)) throw ValidationError("build_fractional: alpha in (0, 2]");
  base_halfwidth_ok(base, N);
  if (cfg.eps <= 0) cfg.eps = 0.5 * std::numeric_limits<double>::epsilon();

  // in 2D the integrand vanishes only at the origin, not along an axis
  const double decay = base.dim == 1 ? alpha : 0.0;
  CosineRule rule;
  switch (cfg.method) {
    case Integrator::fft:
      rule = fft_rule(N, N);
      break;
    case Integrator::tanh_sinh:
      // the nodes must resolve cos(N w) on [0, pi]
      if (cfg.n_t <= 0) cfg.n_t = std::max(200, 4 * N);
      rule = cosine_rule(tanhsinh_grid(decay, cfg.n_t, cfg.eps), N);
      break;
    case Integrator::filon: {
      if (cfg.n_f <= 0) cfg.n_f = default_nf(base.meta.n_q, base.meta.n_c);
      if (cfg.k_g < 0) cfg.k_g = default_kg(N, cfg.n_f);
      // the endpoint panel must resolve cos(N w) on [0, h_g]
      if (cfg.n_t <= 0) cfg.n_t = std::max(80, N / 2);
      const auto plan = filon_plan(N, cfg.k_g, cfg.n_f, N);
      const auto ts = tanhsinh_grid_interval(decay, plan.h_g, cfg.n_t, cfg.eps);
      rule = composite_rule(plan, ts);
      break;
    }
  }

  // the fractional power needs a non-positive symbol; a sign flip would make
  // |.| silently load-bearing
  auto checked = [&](double v) {
    if (v > 0.0)
      throw ValidationError(fmt::format("build_fractional: base symbol positive ({:g})", v));
    return v;
  };

  Stencil out = make_stencil(base.dim, N);
  out.meta = base.meta;
  out.meta.kind = OrderKind::fractional;
  out.meta.alpha = alpha;
  out.meta.method = base.meta.method + "+" + cfg.describe();
  if (base.dim == 1) {
    auto sym = [&](double w) { return checked(dtft_stable(base, std::span(&w, 1))); };
    const auto h = apply_rule_1d(rule, sym, alpha);
    for (int n = 0; n <= N; ++n) out.at(n) = out.at(-n) = h[n];
  } else {
    auto sym = [&](double a, double b) {
      const double k[2] = {a, b};
      return checked(dtft_stable(base, k));
    };
    const auto H = apply_rule_2d(rule, sym, alpha);
    for (int i = -N; i <= N; ++i)
      for (int j = -N; j <= N; ++j) out.at(i, j) = H(std::abs(i), std::abs(j));
  }
  return out;
}

}  // namespace fraclap
