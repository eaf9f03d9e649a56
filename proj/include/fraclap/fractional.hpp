#pragma once

#include "fraclap/spectral.hpp"
#include "fraclap/stencil.hpp"

namespace fraclap {

// Approximation of -(-Delta)^{alpha/2} on [-N, N]^d from an integer base
// stencil; caller scales by h^{-alpha}.
Stencil build_fractional(const Stencil& base, double alpha, int N, IntegratorConfig cfg);

// (-1)^{n+1} Gamma(alpha+1) / (Gamma(alpha/2 - n + 1) Gamma(alpha/2 + n + 1)):
// exact coefficients for the second-order 1D base. Zero at Gamma poles.
double closed_form_1d(double alpha, int n);

// N^alpha * sum_{n=-N}^{N} sum_{k != 0} h_{n + 2Nk}: DC error of the 2N-sample
// trapezoid/FFT evaluation, scaled to the operator (h = 1/N).
double aliasing_error_1d(double alpha, int N);

}  // namespace fraclap
