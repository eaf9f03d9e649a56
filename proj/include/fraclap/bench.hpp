#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclap/reference.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/stencil.hpp"

namespace fraclap {

enum class Method { sin_fft, he_fft, he_filon, he_tanhsinh };

Method parse_method(const std::string& s);
const char* method_name(Method m);

struct BenchConfig {
  int n_c = 2;
  int n_q = 4;
  IntegratorConfig integrator;  // method field is overridden by Method
  unsigned threads = 0;         // 0: hardware concurrency
};

// Stencil for one refinement level (half-width N).
Stencil method_stencil(Method m, double alpha, int N, const BenchConfig& cfg);

struct LevelResult {
  int level = 0;
  int N = 0;
  double E = 0.0;
  long excluded = 0;  // grid points where the reference failed
};

struct ConvergenceReport {
  double alpha = 0.0;
  std::string method;
  std::string problem;
  int n_max = 0;
  std::string config;  // integrator snapshot and halo convention
  std::vector<LevelResult> levels;
  std::vector<double> rates;  // log2(E_i / E_{i+1})
};

// Reference values -(-Delta)^{alpha/2} f on the (2M+1)^2 grid x = j/M,
// row-major; failed points are NaN.
std::vector<double> reference_field(Problem p, double alpha, int M);

// |ref - (N/2)^alpha sum H_{n,m} f(x + stride (n,m)/M)| on the (2M+1)^2 grid
// x = (j, k)/M, with N = s.half and stride = 2M/N: the stencil spacing is 2/N,
// so its reach covers the support diameter. f is zero outside the unit disk.
std::vector<double> error_field(Problem p, const Stencil& s, double alpha, int M,
                                const std::vector<double>& ref, unsigned threads = 0);

ConvergenceReport run_convergence(Problem p, Method m, double alpha, int levels, int n_max,
                                  const BenchConfig& cfg = {});

void write_report_csv(std::ostream& os, const ConvergenceReport& r);
void write_report_json(std::ostream& os, const ConvergenceReport& r);
ConvergenceReport read_report_csv(std::istream& is);
ConvergenceReport read_report_json(std::istream& is);

// Relative angular spread of a (2N+1)^2 field inside annuli [r, r + width)
// covering [r_lo, r_hi); one value per annulus.
struct IsotropyScore {
  std::vector<double> r_inner;
  std::vector<double> score;
};
IsotropyScore isotropy_score(const std::vector<double>& field, int N, double r_lo = 0.2,
                             double r_hi = 0.9, double width = 0.025);

struct IsotropySetting {
  int n_c = 2;
  int n_q = 4;
  // number of isotropic error terms N_q - n - 2 N_c + 2 (n = 2)
  int iso_terms() const { return n_q - 2 * n_c; }
  // N_q - n - N_c + 1
  int n_iso_formula() const { return n_q - 1 - n_c; }
};

struct IsotropyRun {
  IsotropySetting setting;
  std::vector<double> field;
  IsotropyScore score;
};

std::vector<IsotropyRun> run_isotropy(Problem p, double alpha, int N,
                                      const std::vector<IsotropySetting>& settings,
                                      const BenchConfig& cfg = {});

// Fraction of annuli where b scores strictly below a.
double fraction_improved(const IsotropyScore& a, const IsotropyScore& b);

// Plain P2 graymap scaled by the field maximum; sidecar JSON records the scale.
void write_pgm(std::ostream& os, const std::vector<double>& field, int N, double& scale_out);
void write_field_csv(std::ostream& os, const std::vector<double>& field, int N);

}  // namespace fraclap
