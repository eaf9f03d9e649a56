#include "fraclap/smolyak2d.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "fraclap/error.hpp"
#include "fraclap/grid_quadrature.hpp"
#include "fraclap/hermite.hpp"

namespace fraclap {

double SparseWeights2D::at(int i, int j) const {
  i = std::abs(i);
  j = std::abs(j);
  if (i < j) std::swap(i, j);
  auto it = entries.find({i, j});
  return it == entries.end() ? 0.0 : it->second;
}

std::vector<Node2> node_set(int n_q) {
  if (n_q < 0) throw ValidationError("node_set: negative n_q");
  std::set<Node2> s;
  for (int i = 0; i <= n_q; ++i) {
    if (i <= n_q / 2) {
      for (int j = 0; j <= i; ++j) s.insert({i, j});
    } else if (i == n_q) {
      s.insert({i, 0});
    } else {
      for (int m = 0;; ++m) {
        const int j = m * i / (n_q - i);
        if (j > i) break;
        s.insert({i, j});
      }
    }
  }
  return {s.begin(), s.end()};
}

std::vector<Node2> condition_set(int n_q) {
  std::vector<Node2> c;
  for (int m = 0; m <= n_q; ++m)
    for (int n = 0; n <= m && m + n <= n_q; ++n) c.push_back({m, n});
  return c;
}

int orbit_size(int i, int j) {
  if (i == 0 && j == 0) return 1;
  if (j == 0 || i == j || i == 0) return 4;
  return 8;
}

SparseWeights2D implicit_weights(int n_q, double a) {
  if (!(a > 0)) throw ValidationError("implicit_weights: a must be positive");
  const auto nodes = node_set(n_q);
  const auto conds = condition_set(n_q);
  if (nodes.size() != conds.size())
    throw ValidationError("implicit_weights: n_q=" + std::to_string(n_q) + " gives " +
                          std::to_string(nodes.size()) + " nodes for " +
                          std::to_string(conds.size()) + " conditions");
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<double>> he(n_q + 1);
  for (int k = 0; k <= n_q; ++k) he[k] = hermite_values(k * a, n_q).values;

  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  for (int r = 0; r < n; ++r) {
    const auto [m, p] = conds[r];
    b(r) = std::tgamma(m + 1.0) * std::tgamma(p + 1.0);
    for (int c = 0; c < n; ++c) {
      const auto [i, j] = nodes[c];
      // orbit sum; He^2 is even so only the unordered pair matters
      double v = he[i][m] * he[i][m] * he[j][p] * he[j][p];
      if (i != j) v += he[j][m] * he[j][m] * he[i][p] * he[i][p];
      else v *= 2.0;
      A(r, c) = v * orbit_size(i, j) / 2.0;
    }
  }
  // entries span many decades (He_n^2 at large nodes); equilibrate rows then columns
  Eigen::VectorXd rs(n), cs(n);
  for (int r = 0; r < n; ++r) rs(r) = 1.0 / A.row(r).cwiseAbs().maxCoeff();
  Eigen::MatrixXd As = rs.asDiagonal() * A;
  for (int c = 0; c < n; ++c) cs(c) = 1.0 / As.col(c).cwiseAbs().maxCoeff();
  As = As * cs.asDiagonal();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(As);
  if (!lu.isInvertible())
    throw NumericalError("implicit_weights: singular system for n_q=" + std::to_string(n_q));
  const Eigen::VectorXd w = cs.asDiagonal() * lu.solve(rs.asDiagonal() * b);

  SparseWeights2D out;
  out.n_q = n_q;
  out.a = a;
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues();
  out.condition = sv(0) / sv(n - 1);
  for (int c = 0; c < n; ++c) out.entries[nodes[c]] = w(c);
  return out;
}

namespace {

using Vec = Eigen::VectorXd;

Vec rule_on(const std::vector<int>& nodes, double a, int len) {
  const auto w = grid_weights_on_nodes(nodes, a);
  Vec v = Vec::Zero(len);
  for (std::size_t i = 0; i < nodes.size(); ++i) v(nodes[i]) = w[i];
  return v;
}

Vec full_rule(int k, double a, int len) {
  std::vector<int> nodes(k + 1);
  for (int i = 0; i <= k; ++i) nodes[i] = i;
  return rule_on(nodes, a, len);
}

}  // namespace

SparseWeights2D smolyak_weights(int n_q, double a, OddClosure odd) {
  if (n_q < 0) throw ValidationError("smolyak_weights: negative n_q");
  if (!(a > 0)) throw ValidationError("smolyak_weights: a must be positive");
  const int L = n_q + 1;
  auto delta = [&](int n) -> Vec { return full_rule(n, a, L) - full_rule(n - 1, a, L); };
  const Vec e0 = Vec::Unit(L, 0);
  const int K = (n_q + 1) / 2, Kp = n_q / 2;

  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(L, L);
  bool closed = false;
  if (n_q > 0) {
    const Vec d = delta(n_q);
    W += d * e0.transpose() + e0 * d.transpose();
  }
  for (int k = 1; k < K && !closed; ++k) {
    const int r = n_q - k;
    std::vector<int> i0;
    for (int m = 0; m <= k; ++m) i0.push_back(m * r / k);
    i0.erase(std::unique(i0.begin(), i0.end()), i0.end());
    std::vector<int> between;
    for (int x = 1; x < r; ++x)
      if (!std::binary_search(i0.begin(), i0.end(), x)) between.push_back(x);
    std::vector<int> base(i0.begin(), i0.end() - 1);  // i0 without r
    const Vec A0 = rule_on(i0, a, L);
    std::vector<Vec> Aj;
    for (int x : between) {
      auto nodes = base;
      nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), x), x);
      Aj.push_back(rule_on(nodes, a, L));
    }
    const Vec Dr = delta(r);

    if (odd == OddClosure::asymmetric && n_q % 2 == 1 && k == Kp) {
      // single in-between node; closes the sum without the middle term
      if (between.size() != 1)
        throw NumericalError("smolyak_weights: asymmetric closure expects one in-between node");
      const int x = between[0], c = Kp + 1;
      const Vec wc = full_rule(c, a, L);
      const double den0 = wc(x) * A0(c);
      const double den1 = (wc(c) - A0(c)) * Aj[0](x);
      if (den0 == 0.0 || den1 == 0.0)
        throw NumericalError("smolyak_weights: singular asymmetric closure");
      const double b0 = -W(x, c) / den0;
      const double b1 = -(A0(c) * wc(x) + W(c, x)) / den1;
      const Vec wb = b0 * A0 + b1 * Aj[0];
      W += (wc - A0) * wb.transpose() + A0 * wc.transpose();
      closed = true;
      break;
    }

    // arrowhead system: unknowns b0 (on A0) and b_j (on A_j); conditions kill
    // the (r, x_j) entries and keep sum of coefficients equal to 1
    double g = 0.0, s = 0.0;
    std::vector<double> diag, off, rhs;
    for (std::size_t j = 0; j < between.size(); ++j) {
      const int x = between[j];
      diag.push_back(Dr(r) * Aj[j](x));
      off.push_back(A0(r) * Dr(x));
      rhs.push_back(-W(r, x));
      if (diag.back() == 0.0) throw NumericalError("smolyak_weights: zero pivot in closure");
      g += off.back() / diag.back();
      s += rhs.back() / diag.back();
    }
    if (g == 1.0) throw NumericalError("smolyak_weights: singular arrowhead closure");
    const double b0 = (1.0 - s) / (1.0 - g);
    Vec wb = b0 * A0;
    for (std::size_t j = 0; j < between.size(); ++j)
      wb += (rhs[j] - off[j] * b0) / diag[j] * Aj[j];
    W += Dr * wb.transpose() + wb * Dr.transpose();
  }
  if (!closed) {
    const Vec m = full_rule(Kp, a, L);
    W += m * m.transpose();
  }

  SparseWeights2D out;
  out.n_q = n_q;
  out.a = a;
  out.asymmetry = (W - W.transpose()).cwiseAbs().maxCoeff();
  for (int i = 0; i < L; ++i)
    for (int j = 0; j <= i; ++j)
      if (W(i, j) != 0.0 || W(j, i) != 0.0) out.entries[{i, j}] = 0.5 * (W(i, j) + W(j, i));
  return out;
}

WeightField2D expand_full(const SparseWeights2D& sparse) {
  WeightField2D f;
  f.half = sparse.n_q;
  const int n = 2 * f.half + 1;
  f.v.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = -f.half; i <= f.half; ++i)
    for (int j = -f.half; j <= f.half; ++j) f.at(i, j) = sparse.at(i, j);
  return f;
}

}  // namespace fraclap
