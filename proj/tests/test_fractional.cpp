#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "fraclap/error.hpp"
#include "fraclap/fractional.hpp"

using namespace fraclap;
using std::numbers::pi;

namespace {

IntegratorConfig config(Integrator m, int n_f = -1, int k_g = -1) {
  IntegratorConfig c;
  c.method = m;
  c.n_f = n_f;
  c.k_g = k_g;
  return c;
}

// -(-Delta)^{alpha/2} exp(-x^2) in 1D
double gauss_frac(double x, double alpha) {
  const double a = 0.5 * (1 + alpha);
  return -std::pow(2.0, alpha) * boost::math::tgamma(a) / std::sqrt(pi) *
         boost::math::hypergeometric_1F1(a, 0.5, -x * x);
}

// Brute-force sum over n in [-N, N], k != 0 of h_{n + 2Nk}, with the
// asymptotic tail h_m ~ C m^{-1-alpha} beyond K periods.
double tail_sum(double alpha, int N, int K) {
  const double C = boost::math::tgamma(alpha + 1) * std::sin(pi * alpha / 2) / pi;
  double s = 0;
  for (int n = -N; n <= N; ++n) {
    for (int k = 1; k <= K; ++k)
      s += closed_form_1d(alpha, n + 2 * N * k) + closed_form_1d(alpha, n - 2 * N * k);
    s += 2 * C * std::pow(2.0 * N, -1 - alpha) * std::pow(K + 0.5, -alpha) / alpha;
  }
  return s;
}

}  // namespace

TEST_CASE("closed form coefficients") {
  CHECK(closed_form_1d(2, 0) == doctest::Approx(-2).epsilon(1e-14));
  CHECK(closed_form_1d(2, 1) == doctest::Approx(1).epsilon(1e-14));
  CHECK(closed_form_1d(2, 2) == 0.0);
  CHECK(closed_form_1d(2, 7) == 0.0);
  CHECK(closed_form_1d(1, 0) == doctest::Approx(-4 / pi).epsilon(1e-14));
  CHECK(closed_form_1d(1, 1) == doctest::Approx(4 / (3 * pi)).epsilon(1e-14));
  CHECK(closed_form_1d(1, -1) == closed_form_1d(1, 1));
  // Gamma-ratio oracle from Boost for a generic alpha
  for (double alpha : {0.3, 1.7})
    for (int n : {1, 2, 5, 40}) {
      const double ref = boost::math::tgamma(alpha + 1) * std::sin(pi * alpha / 2) / pi *
                         boost::math::tgamma_delta_ratio(n - alpha / 2, alpha + 1);
      CHECK(closed_form_1d(alpha, n) == doctest::Approx(ref).epsilon(1e-12));
    }
  for (double alpha : {0.3, 1.7})
    CHECK(closed_form_1d(alpha, 0) ==
          doctest::Approx(-boost::math::tgamma(alpha + 1) / std::pow(boost::math::tgamma(alpha / 2 + 1), 2))
              .epsilon(1e-13));
  // the coefficients sum to the symbol at 0
  double s = 0;
  for (int n = -4000; n <= 4000; ++n) s += closed_form_1d(1.5, n);
  CHECK(std::abs(s) < 1e-4);
  CHECK_THROWS_AS(closed_form_1d(0.0, 1), ValidationError);
  CHECK_THROWS_AS(closed_form_1d(2.5, 1), ValidationError);
}

TEST_CASE("alpha = 2 reproduces the base") {
  for (int dim : {1, 2})
    for (int n_c : {1, 2}) {
      const auto base = hermite_laplacian(dim, n_c, 2 * n_c);
      // Filon needs its interpolation error resolved: N_f = 8 at N = 64
      for (auto m : {Integrator::filon, Integrator::tanh_sinh}) {
        const int N = m == Integrator::filon ? 64 : 16;
        const auto s = build_fractional(base, 2.0, N, config(m, 8));
        CHECK(s.meta.kind == OrderKind::fractional);
        double worst = 0;
        if (dim == 1)
          for (int i = -N; i <= N; ++i)
            worst = std::max(worst, std::abs(s.at(i) - (std::abs(i) <= base.half ? base.at(i) : 0)));
        else
          for (int i = -N; i <= N; ++i)
            for (int j = -N; j <= N; ++j) {
              const bool in = std::abs(i) <= base.half && std::abs(j) <= base.half;
              worst = std::max(worst, std::abs(s.at(i, j) - (in ? base.at(i, j) : 0)));
            }
        INFO("dim " << dim << " n_c " << n_c << " method " << static_cast<int>(m));
        CHECK(worst < 1e-10);
      }
    }
}

TEST_CASE("1D oracle match") {
  const auto base = hermite_laplacian(1, 1, 2);
  const int N = 64;
  for (double alpha : {0.3, 0.5, 1.0, 1.5, 1.9}) {
    const auto f = build_fractional(base, alpha, N, config(Integrator::filon, 4));
    const auto t = build_fractional(base, alpha, N, config(Integrator::tanh_sinh));
    double ef = 0, et = 0;
    for (int n = 0; n <= 32; ++n) {
      ef = std::max(ef, std::abs(f.at(n) - closed_form_1d(alpha, n)));
      et = std::max(et, std::abs(t.at(n) - closed_form_1d(alpha, n)));
    }
    INFO("alpha " << alpha << " filon " << ef << " tanh-sinh " << et);
    CHECK(ef < 1e-8);
    CHECK(et < 1e-8);
  }
  const auto f1 = build_fractional(base, 1.0, 8, config(Integrator::filon, 6));
  CHECK(std::abs(f1.at(0) + 4 / pi) < 1e-9);
  CHECK(std::abs(f1.at(1) - 4 / (3 * pi)) < 1e-8);
}

TEST_CASE("2D filon against full tanh-sinh") {
  const auto base = hermite_laplacian(2, 1, 2);
  const int N = 16;
  const auto f = build_fractional(base, 1.5, N, config(Integrator::filon, 8));
  const auto t = build_fractional(base, 1.5, N, config(Integrator::tanh_sinh));
  double worst = 0;
  for (std::size_t i = 0; i < f.c.size(); ++i) worst = std::max(worst, std::abs(f.c[i] - t.c[i]));
  CHECK(worst < 1e-8);
  CHECK(f.at(3, 5) == doctest::Approx(f.at(5, 3)).epsilon(1e-13));
  CHECK(f.at(-3, 5) == f.at(3, -5));
}

TEST_CASE("aliasing error") {
  std::vector<double> v;
  for (int N : {32, 64, 128, 256}) v.push_back(aliasing_error_1d(1.0, N));
  for (std::size_t i = 1; i < v.size(); ++i) {
    CHECK(v[i] > 0);
    CHECK(v[i] / v[i - 1] == doctest::Approx(1.0).epsilon(0.1));
  }
  // exact up to rounding, amplified by N^alpha
  CHECK(std::abs(aliasing_error_1d(2.0, 64)) < 1e-10);
  CHECK(aliasing_error_1d(0.1, 64) > 0);
  CHECK(aliasing_error_1d(1.9, 64) > 0);

  for (double alpha : {1.0, 1.5}) {
    const int N = 16;
    const double brute = std::pow(double(N), alpha) * tail_sum(alpha, N, 4000);
    CHECK(aliasing_error_1d(alpha, N) == doctest::Approx(brute).epsilon(1e-6));
  }
}

TEST_CASE("zero-sum limit") {
  const auto base = hermite_laplacian(1, 1, 2);
  std::vector<double> sums;
  for (int N : {16, 32, 64}) {
    const auto s = build_fractional(base, 0.8, N, config(Integrator::filon));
    double t = 0;
    for (double c : s.c) t += c;
    sums.push_back(std::abs(t));
  }
  CHECK(sums[1] < sums[0]);
  CHECK(sums[2] < sums[1]);
}

TEST_CASE("order transfers from the base stencil") {
  const auto base = hermite_laplacian(1, 2, 4);
  const double L = 8, x0 = 0.3;
  for (double alpha : {1.0, 1.5}) {
    std::vector<double> err;
    for (int N : {32, 64, 128, 256}) {
      const double h = L / N;
      const auto s = build_fractional(base, alpha, 2 * N, config(Integrator::filon));
      double acc = 0;
      for (int j = -2 * N; j <= 2 * N; ++j) {
        const double x = x0 + j * h;
        acc += s.at(j) * std::exp(-x * x);
      }
      err.push_back(std::abs(acc / std::pow(h, alpha) - gauss_frac(x0, alpha)));
    }
    const double slope = std::log2(err[0] / err[3]) / 3;
    INFO("alpha " << alpha << " errors " << err[0] << " " << err[1] << " " << err[2] << " " << err[3]);
    CHECK(slope >= 3.7);
  }
}

TEST_CASE("fractional validation") {
  Stencil flipped = hermite_laplacian(1, 1, 2);
  for (double& c : flipped.c) c = -c;
  CHECK_THROWS_AS(build_fractional(flipped, 1.0, 8, config(Integrator::filon)), ValidationError);

  Stencil lumpy = hermite_laplacian(1, 1, 2);
  lumpy.at(0) += 0.1;
  CHECK_THROWS_AS(build_fractional(lumpy, 1.0, 8, config(Integrator::filon)), ValidationError);

  const auto base = hermite_laplacian(1, 2, 4);
  CHECK_THROWS_AS(build_fractional(base, 1.0, base.half - 1, config(Integrator::filon)),
                  ValidationError);
  CHECK_THROWS_AS(build_fractional(base, 0.0, 8, config(Integrator::filon)), ValidationError);

  const auto s = build_fractional(base, 1.2, 16, config(Integrator::filon));
  CHECK(s.meta.alpha == 1.2);
  CHECK(s.meta.method.find("filon") != std::string::npos);
}
