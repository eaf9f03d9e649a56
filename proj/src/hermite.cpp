#include "fraclap/hermite.hpp"

#include <cmath>
#include <string>

#include "fraclap/error.hpp"

namespace fraclap {

HermiteSequence hermite_values(double x, int max_order) {
  if (max_order < 0) throw ValidationError("hermite_values: negative max_order");
  HermiteSequence h;
  h.x = x;
  h.values.resize(max_order + 1);
  h.values[0] = 1.0;
  if (max_order >= 1) h.values[1] = x;
  for (int n = 1; n < max_order; ++n)
    h.values[n + 1] = x * h.values[n] - n * h.values[n - 1];
  return h;
}

double hermite_tensor_entry(std::span<const int> a, std::span<const double> x) {
  const int d = static_cast<int>(x.size());
  std::vector<int> count(d, 0);
  for (int k : a) {
    if (k < 0 || k >= d)
      throw ValidationError("hermite_tensor_entry: index " + std::to_string(k) +
                            " out of range for dimension " + std::to_string(d));
    ++count[k];
  }
  double p = 1.0;
  for (int k = 0; k < d; ++k) p *= hermite_values(x[k], count[k]).values.back();
  return p;
}

LaplacianHermiteTable laplacian_hermite_table(double r, int d, int max_m) {
  if (d < 1) throw ValidationError("laplacian_hermite_table: d must be >= 1");
  if (r < 0) throw ValidationError("laplacian_hermite_table: r must be >= 0");
  if (max_m < 0) throw ValidationError("laplacian_hermite_table: negative max_m");
  LaplacianHermiteTable t;
  t.d = d;
  t.r = r;
  t.even.resize(max_m + 1);
  t.odd.resize(max_m + 1);
  t.even[0] = 1.0;
  t.odd[0] = r;
  for (int m = 1; m <= max_m; ++m) {
    t.even[m] = r * t.odd[m - 1] - (d + 2.0 * (m - 1)) * t.even[m - 1];
    t.odd[m] = r * t.even[m] - 2.0 * m * t.odd[m - 1];
  }
  return t;
}

double laplacian_kernel(std::span<const double> v, int n_c) {
  if (n_c < 1) throw ValidationError("laplacian_kernel: n_c must be >= 1");
  double r2 = 0.0;
  for (double c : v) r2 += c * c;
  const auto t = laplacian_hermite_table(std::sqrt(r2), static_cast<int>(v.size()), n_c);
  double sum = 0.0, coef = 1.0;
  for (int j = 0; j < n_c; ++j) {
    sum += coef * t.even[j + 1];
    coef *= -1.0 / (2.0 * (j + 1));
  }
  return sum;
}

}  // namespace fraclap
