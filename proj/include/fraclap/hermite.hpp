#pragma once

#include <span>
#include <vector>

namespace fraclap {

// Probabilist Hermite polynomials He_0..He_max at a single abscissa.
struct HermiteSequence {
  double x = 0.0;
  std::vector<double> values;
  int max_order() const { return static_cast<int>(values.size()) - 1; }
};

HermiteSequence hermite_values(double x, int max_order);

// prod_k He_{s(a|k)}(x_k), s(a|k) = number of occurrences of k in a.
double hermite_tensor_entry(std::span<const int> a, std::span<const double> x);

// Radial Laplacian-Hermite family: even[m] = H_{0,m}(r), odd[m] = H_{1,m}(r).
struct LaplacianHermiteTable {
  int d = 1;
  double r = 0.0;
  std::vector<double> even;
  std::vector<double> odd;
};

LaplacianHermiteTable laplacian_hermite_table(double r, int d, int max_m);

// sum_{j<n_c} (-1)^j / (2^j j!) H_{0,j+1}(|v|), with d = v.size().
double laplacian_kernel(std::span<const double> v, int n_c);

}  // namespace fraclap
