#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fraclap {

// Quadrature for the cosine transforms int_0^pi cos(n w) g(w) dw, n = 0..rows-1:
// the integral is sum_p U(n, p) g(nodes[p]).
struct CosineRule {
  std::vector<double> nodes;
  Eigen::MatrixXd U;
  int n_max() const { return static_cast<int>(U.rows()) - 1; }
};

// Trapezoid on w_j = j pi / N (equivalent to the 2N-point DFT of the even symbol).
CosineRule fft_rule(int N, int n_max);

// Coefficients -(1/2N) sum_{j<2N} |s_j|^{alpha/2} cos(pi n j / N), n = 0..N,
// from symbol samples s_j at w_j = j pi / N, j = 0..2N-1.
std::vector<double> fft_inverse_dtft(const std::vector<double>& samples, double alpha);

// psi(x) = tanh(pi/2 sinh x) and helpers, accurate in the tails.
double ts_psi_prime(double x);
double ts_one_minus_psi(double x);  // x >= 0

enum class EndpointMode { symmetric, asymmetric };

struct EndpointEstimate {
  double guess = 0.0;       // closed-form initial guess (positive side)
  double x_star = 0.0;      // refined truncation abscissa (positive side)
  double guess_neg = 0.0;   // asymmetric only: branch-point side
  double x_star_neg = 0.0;
  int n_l = 0;              // asymmetric only: nodes on the negative side
};

// Truncation abscissae for which the integrand-magnitude ratio falls below eps.
// Model integrand |2 sin(w/2)|^alpha; alpha = 0 models an integrand that does
// not vanish at w = 0 (each axis of a 2D transform). n_t is only used to derive n_l.
EndpointEstimate tanhsinh_endpoint(double alpha, double eps, EndpointMode mode,
                                   double h_g = 0.0, int n_t = 0);

struct TanhSinhGrid {
  int n_t = 0;
  int n_l = 0;
  double h_e = 0.0;
  double lo = 0.0, hi = 0.0;  // integration interval
  EndpointEstimate endpoint;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// int_0^pi, folded from the symmetric rule on (0, 2 pi): branch point at 0 only.
TanhSinhGrid tanhsinh_grid(double alpha, int n_t, double eps);
// int_0^{h_g}, asymmetric: n_t nodes towards h_g, n_l towards the branch point.
TanhSinhGrid tanhsinh_grid_interval(double alpha, double h_g, int n_t, double eps);

CosineRule cosine_rule(const TanhSinhGrid& g, int n_max);

using Symbol1D = std::function<double(double)>;

// -(1/pi) int_0^pi cos(n w) |symbol(w)|^{alpha/2} dw on the tanh-sinh grid.
double tanhsinh_coefficient(const Symbol1D& symbol, double alpha, int n, const TanhSinhGrid& g);

// Moments J_k = int_{c-s}^{c+s} cos(n x) (x - c)^k dx, k = 0..kmax.
std::vector<double> filon_moments(int n, double c, double s, int kmax);

struct FilonPlan {
  int N = 0, k_g = 0, n_f = 0, q = 0, n_max = 0;
  double h = 0.0, h_g = 0.0;
  Eigen::MatrixXd Vinv;  // inverse of V_{kj} = (j - n_f/2)^k
  CosineRule rule;       // nodes j pi / N, j = 0..N, endpoint regions mirrored
  int regions() const { return (N - k_g) / q; }
};

FilonPlan filon_plan(int N, int k_g, int n_f, int n_max);

// Region m of the plan for index n: interpolation node indices (before
// mirroring) and the weights b_j.
struct FilonRegion {
  double a = 0.0, b = 0.0, c = 0.0;
  std::vector<int> index;
  std::vector<double> weight;
};
FilonRegion filon_region(const FilonPlan& plan, int n, int m);

// Smallest k_g whose interpolation nodes stay at w >= 0.
int min_kg(int n_f);
int default_kg(int N, int n_f);
int default_nf(int n_q, int n_c);

// Filon on [h_g, pi] plus the asymmetric tanh-sinh grid on [0, h_g].
CosineRule composite_rule(const FilonPlan& plan, const TanhSinhGrid& ts);

double composite_coefficient(const Symbol1D& symbol, double alpha, int n, const FilonPlan& plan,
                             const TanhSinhGrid& ts);

// -(1/pi) sum_p U(n,p) |symbol(w_p)|^{alpha/2}, n = 0..n_max.
std::vector<double> apply_rule_1d(const CosineRule& r, const Symbol1D& symbol, double alpha);

// 2D separable: -(1/pi^2) U F U^T, F(p, q) = |symbol(w_p, w_q)|^{alpha/2}.
Eigen::MatrixXd apply_rule_2d(const CosineRule& r,
                              const std::function<double(double, double)>& symbol, double alpha);

enum class Integrator { fft, tanh_sinh, filon };

struct IntegratorConfig {
  Integrator method = Integrator::filon;
  int n_t = 0;          // 0: default per method
  double eps = 0.0;     // 0: half machine epsilon
  int k_g = -1;         // -1: h_g close to pi/4
  int n_f = -1;         // -1: from (n_q, n_c) of the base stencil

  std::string describe() const;
};

Integrator parse_integrator(const std::string& s);

}  // namespace fraclap
