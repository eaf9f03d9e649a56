#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fraclap/error.hpp"

namespace fraclap {

struct SeriesResult {
  double value = 0.0;
  double error = 0.0;  // magnitude of the first omitted term (0 when terminated)
  int terms = 0;
};

// Raised when the term cap is hit; carries the partial sum.
class SeriesError : public NumericalError {
 public:
  SeriesError(const std::string& what, SeriesResult partial)
      : NumericalError(what), partial(partial) {}
  SeriesResult partial;
};

// Generalised hypergeometric series pFq(top; bottom; z), summed until the
// relative term size drops below tol.
SeriesResult phq(std::span<const double> top, std::span<const double> bottom, double z,
                 double tol = 1e-14, int cap = 10000);

enum class Problem { f1, f2 };

Problem parse_problem(const std::string& s);
const char* problem_name(Problem p);

inline constexpr double kBeta = 6.6;  // f1 exponent
inline constexpr int kPow = 6;        // f2 exponent

double f1_value(double r);
double f2_value(double r);
// -(-Delta)^{alpha/2} f in 2D
double f1_frac_laplacian(double r, double alpha);
double f2_frac_laplacian(double r, double alpha);

double problem_value(Problem p, double r);
double problem_frac_laplacian(Problem p, double r, double alpha);

// Riesz normalisation C_{2,alpha} = 2^alpha Gamma(1+alpha/2) / (pi |Gamma(-alpha/2)|)
double riesz_constant(double alpha);

// r, f(r), -(-Delta)^{alpha/2} f(r) on a uniform radial grid.
void export_reference_csv(std::ostream& os, Problem p, double alpha, double r_max, int samples);

}  // namespace fraclap
