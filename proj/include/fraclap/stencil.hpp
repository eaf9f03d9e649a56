#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraclap/grid_quadrature.hpp"
#include "fraclap/smolyak2d.hpp"

namespace fraclap {

enum class OrderKind { integer, fractional };

struct StencilMeta {
  OrderKind kind = OrderKind::integer;
  double alpha = 2.0;
  int n_c = 1;
  int n_q = 2;
  double a = 1.0;
  std::string method = "hermite";
};

// Symmetric coefficient tensor on [-half, half]^dim, row-major, no h scaling.
struct Stencil {
  int dim = 1;
  int half = 1;
  std::vector<double> c;
  StencilMeta meta;

  int width() const { return 2 * half + 1; }
  double& at(int i) { return c[i + half]; }
  double at(int i) const { return c[i + half]; }
  double& at(int i, int j) { return c[(i + half) * width() + (j + half)]; }
  double at(int i, int j) const { return c[(i + half) * width() + (j + half)]; }
};

Stencil make_stencil(int dim, int half);

Stencil build_integer_laplacian(const GridQuadrature1D& rule, int n_c);
Stencil build_integer_laplacian(const SparseWeights2D& rule, int n_c);

// Convenience: weights at the eliminated scale of n_q (of n_q - 1 when n_q is
// odd) unless a is given, then the stencil; trailing zero rings are trimmed.
Stencil hermite_laplacian(int dim, int n_c, int n_q, double a = 0.0);

// Standard (2N_c)-th order central difference, d = 1 or 2 (axis sum in 2D).
Stencil classic_laplacian(int dim);

// sum_i c_i prod_l cos(i_l k_l)
double dtft(const Stencil& s, std::span<const double> k);
// Same symbol rebuilt from squared sines; only valid for zero-sum stencils.
double dtft_stable(const Stencil& s, std::span<const double> k);

struct ProbeResult {
  double slope = 0.0;
  std::vector<double> h;
  std::vector<double> error;
  int usable = 0;  // leading entries above the rounding floor
};

// Applies s / h^2 to f at `point` for each h, slope of log error vs log h.
ProbeResult convergence_probe(const Stencil& s,
                              const std::function<double(std::span<const double>)>& f,
                              double exact, std::span<const double> point,
                              std::span<const double> hs);

void write_stencil(std::ostream& os, const Stencil& s);
Stencil read_stencil(std::istream& is);

}  // namespace fraclap
