#pragma once

#include <span>
#include <vector>

namespace fraclap {

struct GaussHermiteRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // sum to 1 (probabilist weight)
};

GaussHermiteRule gauss_hermite(int count);

// One-sided weights w_0..w_{n_q} on nodes k*a; the full rule mirrors k -> -k.
struct GridQuadrature1D {
  int n_q = 0;
  double a = 1.0;
  std::vector<double> w;
};

GridQuadrature1D grid_weights_1d(int n_q, double a);

// Same construction on an arbitrary set of non-negative integer offsets
// (0 must be present). Order of the rule is nodes.size() - 1; the result is
// indexed like `nodes`.
std::vector<double> grid_weights_on_nodes(std::span<const int> nodes, double a);

// Scale a in (0.5, 3] with w_{n_q}(a) = 0. Even n_q only.
double solve_elimination_scale(int n_q);

struct OrthogonalityResidual {
  double cross = 0.0;   // max |sum w He_m He_n| / sqrt(m! n!), m < n
  double moment = 0.0;  // max |sum w He_n^2 - n!| / n!
  double max() const { return cross > moment ? cross : moment; }
};

OrthogonalityResidual verify_orthogonality_1d(const GridQuadrature1D& rule);

}  // namespace fraclap
