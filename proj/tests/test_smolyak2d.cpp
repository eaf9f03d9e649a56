#include <doctest.h>

#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/grid_quadrature.hpp"
#include "fraclap/hermite.hpp"
#include "fraclap/smolyak2d.hpp"

using namespace fraclap;

namespace {

double max_condition_residual(const SparseWeights2D& w) {
  const auto f = expand_full(w);
  const int N = w.n_q;
  double worst = 0.0;
  for (int m = 0; m <= N; ++m)
    for (int n = 0; m + n <= N; ++n) {
      double s = 0.0;
      for (int i = -N; i <= N; ++i)
        for (int j = -N; j <= N; ++j) {
          const double hi = hermite_values(i * w.a, m).values.back();
          const double hj = hermite_values(j * w.a, n).values.back();
          s += f.at(i, j) * hi * hi * hj * hj;
        }
      const double target = std::tgamma(m + 1.0) * std::tgamma(n + 1.0);
      worst = std::max(worst, std::abs(s - target) / target);
    }
  return worst;
}

std::vector<double> scales_for(int n_q) {
  std::vector<double> s{0.8, 1.0};
  if (n_q >= 2 && n_q % 2 == 0) s.push_back(solve_elimination_scale(n_q));
  return s;
}

}  // namespace

TEST_CASE("node selection rule") {
  const std::vector<Node2> n4{{0, 0}, {1, 0}, {1, 1}, {2, 0}, {2, 1},
                              {2, 2}, {3, 0}, {3, 3}, {4, 0}};
  CHECK(node_set(4) == n4);
  CHECK(node_set(0) == std::vector<Node2>{{0, 0}});
  CHECK(node_set(2) == std::vector<Node2>{{0, 0}, {1, 0}, {1, 1}, {2, 0}});
  for (int n = 0; n <= 8; ++n) {
    // triangle number of conditions m >= n, m + n <= N
    const std::size_t tri = (n / 2 + 1) * (n / 2 + 1 + (n % 2));
    CHECK(node_set(n).size() == condition_set(n).size());
    CHECK(condition_set(n).size() == tri);
  }
}

TEST_CASE("implicit weights examples") {
  const auto w2 = implicit_weights(2, std::sqrt(3.0));
  CHECK(w2.at(0, 0) == doctest::Approx(4.0 / 9).epsilon(1e-12));
  CHECK(w2.at(1, 0) == doctest::Approx(1.0 / 9).epsilon(1e-12));
  CHECK(w2.at(1, 1) == doctest::Approx(1.0 / 36).epsilon(1e-12));
  CHECK(std::abs(w2.at(2, 0)) < 1e-13);
  const auto w4 = implicit_weights(4, solve_elimination_scale(4));
  CHECK(std::abs(w4.at(4, 0)) < 1e-10);
  CHECK(w4.at(2, 1) == doctest::Approx(0.009887677048420692).epsilon(1e-9));
  const auto w0 = implicit_weights(0, 1.0);
  CHECK(w0.entries.size() == 1);
  CHECK(w0.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("implicit weights satisfy all conditions and unit mass") {
  for (int n = 0; n <= 6; ++n)
    for (double a : scales_for(n)) {
      const auto w = implicit_weights(n, a);
      CHECK(max_condition_residual(w) < 1e-9);
      const auto f = expand_full(w);
      double mass = 0;
      for (double v : f.v) mass += v;
      CHECK(std::abs(mass - 1.0) < 1e-10);
      // sparsity: only selected nodes are stored
      for (const auto& [node, v] : w.entries)
        CHECK(std::find(node_set(n).begin(), node_set(n).end(), node) != node_set(n).end());
    }
}

TEST_CASE("modified Smolyak construction equals the implicit system") {
  for (int n = 0; n <= 8; ++n)
    for (double a : scales_for(n))
      for (auto closure : {OddClosure::asymmetric, OddClosure::arrowhead}) {
        const auto I = implicit_weights(n, a);
        const auto S = smolyak_weights(n, a, closure);
        double diff = 0.0;
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= i; ++j) diff = std::max(diff, std::abs(I.at(i, j) - S.at(i, j)));
        CAPTURE(n);
        CAPTURE(a);
        CHECK(diff < 1e-9);
        CHECK(S.asymmetry < 1e-9);
      }
}

TEST_CASE("odd order asymmetric closure assembles symmetric weights") {
  const auto S = smolyak_weights(5, 1.0, OddClosure::asymmetric);
  CHECK(S.asymmetry < 1e-10);
  CHECK(max_condition_residual(S) < 1e-9);
}

TEST_CASE("expand_full bookkeeping") {
  SparseWeights2D one;
  one.n_q = 0;
  one.entries[{0, 0}] = 1.0;
  const auto f1 = expand_full(one);
  CHECK(f1.v.size() == 1);
  CHECK(f1.at(0, 0) == 1.0);

  const auto w2 = implicit_weights(2, std::sqrt(3.0));
  auto f2 = expand_full(w2);
  int nonzero = 0;
  for (double v : f2.v)
    if (std::abs(v) > 1e-14) ++nonzero;
  CHECK(nonzero == 9);

  const auto w5 = implicit_weights(5, 1.0);
  double canon = 0;
  for (const auto& [node, v] : w5.entries) canon += v * orbit_size(node.first, node.second);
  double full = 0;
  for (double v : expand_full(w5).v) full += v;
  CHECK(full == doctest::Approx(canon).epsilon(1e-14));
  CHECK(f2.at(-1, 1) == f2.at(1, -1));
}
