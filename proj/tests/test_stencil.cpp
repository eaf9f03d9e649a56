#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclap/error.hpp"
#include "fraclap/stencil.hpp"

using namespace fraclap;
using std::numbers::pi;

namespace {

double gauss(std::span<const double> x) {
  double r2 = 0;
  for (double c : x) r2 += c * c;
  return std::exp(-r2);
}

// Delta exp(-r^2) = (4 r^2 - 2 d) exp(-r^2)
double gauss_laplacian(std::span<const double> x) {
  double r2 = 0;
  for (double c : x) r2 += c * c;
  return (4 * r2 - 2.0 * x.size()) * std::exp(-r2);
}

double sum(const Stencil& s) {
  double t = 0;
  for (double c : s.c) t += c;
  return t;
}

}  // namespace

TEST_CASE("second order hermite stencils") {
  const auto s1 = hermite_laplacian(1, 1, 2);
  REQUIRE(s1.half == 1);
  CHECK(s1.at(-1) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(s1.at(0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(s1.at(1) == doctest::Approx(1.0).epsilon(1e-13));

  const auto s2 = build_integer_laplacian(implicit_weights(2, std::sqrt(3.0)), 1);
  CHECK(std::abs(sum(s2)) < 1e-12);
  const auto t = hermite_laplacian(2, 1, 2);
  CHECK(t.half == 1);
  // a^2 w K: 3 (1/9)(3 - 2), 3 (1/36)(6 - 2), 3 (4/9)(-2)
  CHECK(t.at(1, 0) == doctest::Approx(1.0 / 3));
  CHECK(t.at(1, 1) == doctest::Approx(1.0 / 3));
  CHECK(t.at(0, 0) == doctest::Approx(-8.0 / 3));
  CHECK_THROWS_AS(build_integer_laplacian(grid_weights_1d(3, 1.0), 2), ValidationError);
}

TEST_CASE("fourth order 1D hermite stencil") {
  const auto s = hermite_laplacian(1, 2, 4);
  // the outer weight is eliminated, leaving 7 points
  REQUIRE(s.half == 3);
  const double ref[4] = {-1.70738455, 0.73887174, 0.1544513, -0.03963077};
  for (int i = 0; i <= 3; ++i) CHECK(s.at(i) == doctest::Approx(ref[i]).epsilon(1e-7));
  double m0 = 0, m2 = 0, m4 = 0;
  for (int i = -3; i <= 3; ++i) {
    m0 += s.at(i);
    m2 += s.at(i) * i * i;
    m4 += s.at(i) * std::pow(i, 4);
  }
  CHECK(std::abs(m0) < 1e-12);
  CHECK(m2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(m4) < 1e-11);
  // the 5-point [-1/12, 4/3, -5/2, 4/3, -1/12] is a different (non-Hermite) rule
  CHECK(s.at(0) != doctest::Approx(-2.5));
}

TEST_CASE("stencils are fully symmetric and zero-sum") {
  for (int nc = 1; nc <= 2; ++nc)
    for (int nq = 2 * nc; nq <= 2 * nc + 2; ++nq) {
      const auto s = hermite_laplacian(2, nc, nq);
      CHECK(std::abs(sum(s)) < 1e-10);
      for (int i = -s.half; i <= s.half; ++i)
        for (int j = -s.half; j <= s.half; ++j) {
          CHECK(s.at(i, j) == s.at(-i, j));
          CHECK(s.at(i, j) == s.at(j, i));
        }
    }
}

TEST_CASE("dtft and the stable symbol") {
  const auto c = classic_laplacian(1);
  const double kpi = pi;
  CHECK(dtft(c, std::span(&kpi, 1)) == doctest::Approx(-4.0));
  const double k0 = 0.0;
  CHECK(dtft(c, std::span(&k0, 1)) == 0.0);
  CHECK(dtft_stable(c, std::span(&k0, 1)) == 0.0);

  const auto s4 = hermite_laplacian(1, 2, 4);
  double direct = 0;
  for (int i = -3; i <= 3; ++i) direct += s4.at(i) * std::cos(i * pi);
  CHECK(dtft(s4, std::span(&kpi, 1)) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(dtft_stable(s4, std::span(&kpi, 1)) == doctest::Approx(direct).epsilon(1e-13));

  const double k = 1e-8;
  const double exact = -4.0 * std::sin(k / 2) * std::sin(k / 2);
  CHECK(std::abs(dtft_stable(c, std::span(&k, 1)) - exact) < 1e-6 * std::abs(exact));

  // near zero the stable form keeps full precision where the cosine sum cannot
  const double k6 = 1e-6;
  const double stable = dtft_stable(s4, std::span(&k6, 1));
  CHECK(stable == doctest::Approx(-k6 * k6).epsilon(1e-6));
  const double naive = dtft(s4, std::span(&k6, 1));
  CHECK(std::abs(naive + k6 * k6) > std::abs(stable + k6 * k6));

  const auto t = hermite_laplacian(2, 2, 4);
  const double kk[2] = {3e-7, -2e-7};
  CHECK(dtft_stable(t, kk) == doctest::Approx(-(9e-14 + 4e-14)).epsilon(1e-6));
  const double kz[2] = {0.0, 0.0};
  CHECK(dtft_stable(t, kz) == 0.0);
}

TEST_CASE("symbol negativity on (0, pi]^d") {
  for (int d = 1; d <= 2; ++d)
    for (int nc = 1; nc <= 3; ++nc)
      for (int nq : {2 * nc, 2 * nc + 1}) {
        const auto s = hermite_laplacian(d, nc, nq);
        double worst = -1e300;
        for (int i = 1; i <= 64; ++i)
          for (int j = 1; j <= (d == 2 ? 64 : 1); ++j) {
            const double k[2] = {i * pi / 64, j * pi / 64};
            worst = std::max(worst, dtft_stable(s, std::span(k, d)));
          }
        CAPTURE(d);
        CAPTURE(nc);
        CAPTURE(nq);
        CHECK(worst < 0.0);
      }
}

TEST_CASE("1D symbol matches -k^2 through order 2 N_c") {
  for (int nc = 1; nc <= 3; ++nc) {
    const auto s = hermite_laplacian(1, nc, 2 * nc);
    std::vector<double> lk, le;
    for (double k : {0.4, 0.2, 0.1}) {
      lk.push_back(std::log(k));
      le.push_back(std::log(std::abs(dtft_stable(s, std::span(&k, 1)) + k * k)));
    }
    const double slope = (le[2] - le[0]) / (lk[2] - lk[0]);
    CAPTURE(nc);
    CHECK(slope == doctest::Approx(2 * nc + 2).epsilon(0.05));
  }
}

TEST_CASE("leading error term is rotation invariant when N_q >= 2 N_c + 1") {
  auto spread = [](const Stencil& s, int deg) {
    double lo = 1e300, hi = -1e300;
    for (int t = 0; t < 12; ++t) {
      const double th = t * pi / 23;
      double e = 0;
      for (int i = -s.half; i <= s.half; ++i)
        for (int j = -s.half; j <= s.half; ++j)
          e += s.at(i, j) * std::pow(i * std::cos(th) + j * std::sin(th), deg);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    return (hi - lo) / std::max(std::abs(hi), 1.0);
  };
  for (int nc = 1; nc <= 2; ++nc) {
    for (int nq = 2 * nc + 1; nq <= 2 * nc + 2; ++nq) {
      CAPTURE(nq);
      CHECK(spread(hermite_laplacian(2, nc, nq), 2 * nc + 2) < 1e-8);
    }
    CHECK(spread(hermite_laplacian(2, nc, 2 * nc), 2 * nc + 2) > 1e-3);
  }
}

TEST_CASE("convergence probe orders") {
  const double p1[1] = {0.3};
  const double p2[2] = {0.3, -0.2};
  const std::vector<double> hs{0.2, 0.1, 0.05};
  for (int d = 1; d <= 2; ++d) {
    std::span<const double> pt(d == 1 ? p1 : p2, d);
    const double exact = gauss_laplacian(pt);
    const auto r1 = convergence_probe(hermite_laplacian(d, 1, 2), gauss, exact, pt, hs);
    CHECK(r1.slope == doctest::Approx(2.0).epsilon(0.1));
    const auto r2 = convergence_probe(hermite_laplacian(d, 2, 4), gauss, exact, pt, hs);
    CHECK(r2.slope == doctest::Approx(4.0).epsilon(0.075));
    CHECK(r2.usable == 3);
  }
  auto one = [](std::span<const double>) { return 1.0; };
  const auto rc = convergence_probe(hermite_laplacian(1, 2, 4), one, 0.0, std::span(p1, 1), hs);
  for (double e : rc.error) CHECK(std::abs(e) < 1e-12);
  CHECK(rc.usable == 0);
}

TEST_CASE("stencil file round trip is bit exact") {
  for (int d = 1; d <= 2; ++d) {
    const auto s = hermite_laplacian(d, 2, 4);
    std::stringstream ss;
    write_stencil(ss, s);
    const auto t = read_stencil(ss);
    CHECK(t.dim == s.dim);
    CHECK(t.half == s.half);
    CHECK(t.c == s.c);
    CHECK(t.meta.a == s.meta.a);
    CHECK(t.meta.n_q == 4);
    CHECK(t.meta.method == s.meta.method);
  }
  std::stringstream bad("1,2,3\n");
  CHECK_THROWS_AS(read_stencil(bad), ValidationError);
}
