#include "fraclap/bench.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "fraclap/fractional.hpp"

namespace fraclap {

Method parse_method(const std::string& s) {
  if (s == "sin-fft") return Method::sin_fft;
  if (s == "he-fft") return Method::he_fft;
  if (s == "he-filon") return Method::he_filon;
  if (s == "he-tanhsinh") return Method::he_tanhsinh;
  throw ValidationError("unknown method '" + s + "'");
}

const char* method_name(Method m) {
  switch (m) {
    case Method::sin_fft: return "sin-fft";
    case Method::he_fft: return "he-fft";
    case Method::he_filon: return "he-filon";
    case Method::he_tanhsinh: return "he-tanhsinh";
  }
  return "?";
}

Stencil method_stencil(Method m, double alpha, int N, const BenchConfig& cfg) {
  IntegratorConfig ic = cfg.integrator;
  Stencil base;
  switch (m) {
    case Method::sin_fft:
      base = classic_laplacian(2);
      ic.method = Integrator::fft;
      break;
    case Method::he_fft:
      base = hermite_laplacian(2, cfg.n_c, cfg.n_q);
      ic.method = Integrator::fft;
      break;
    case Method::he_filon:
      base = hermite_laplacian(2, cfg.n_c, cfg.n_q);
      ic.method = Integrator::filon;
      break;
    case Method::he_tanhsinh:
      base = hermite_laplacian(2, cfg.n_c, cfg.n_q);
      ic.method = Integrator::tanh_sinh;
      break;
  }
  return build_fractional(base, alpha, N, ic);
}

namespace {

unsigned thread_count(unsigned requested) {
  if (requested) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(t) for t in [0, nthreads) and joins.
template <class F>
void parallel(unsigned nthreads, F body) {
  if (nthreads <= 1) {
    body(0u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(body, t);
  for (auto& th : pool) th.join();
}

int canonical_multiplicity(int j, int k) {
  if (j == 0 && k == 0) return 1;
  if (k == 0 || j == k) return 4;
  return 8;
}

}  // namespace

std::vector<double> reference_field(Problem p, double alpha, int M) {
  const int W = 2 * M + 1;
  std::vector<double> out(static_cast<std::size_t>(W) * W, 0.0);
  // value depends on j^2 + k^2 only
  std::vector<double> cache(2 * M * M + 1, std::numeric_limits<double>::quiet_NaN());
  std::vector<char> done(cache.size(), 0);
  for (int j = 0; j <= M; ++j)
    for (int k = 0; k <= j; ++k) {
      const int d2 = j * j + k * k;
      if (!done[d2]) {
        done[d2] = 1;
        try {
          cache[d2] = problem_frac_laplacian(p, std::sqrt(double(d2)) / M, alpha);
        } catch (const NumericalError&) {
        }
      }
    }
  for (int j = -M; j <= M; ++j)
    for (int k = -M; k <= M; ++k) out[(j + M) * W + (k + M)] = cache[j * j + k * k];
  return out;
}

std::vector<double> error_field(Problem p, const Stencil& s, double alpha, int M,
                                const std::vector<double>& ref, unsigned threads) {
  if (s.dim != 2) throw ValidationError("error_field: 2D stencil required");
  const int N = s.half;
  if (N < 1 || (2 * M) % N != 0)
    throw ValidationError(
        fmt::format("error_field: twice the grid size {} not a multiple of half-width {}", M, N));
  // stencil spacing 2/N: its reach spans the support diameter
  const int stride = 2 * M / N;
  const int W = 2 * M + 1;
  std::vector<double> f(static_cast<std::size_t>(W) * W, 0.0);
  std::vector<int> extent(W, -1);  // columns with r < 1 in each row
  for (int a = -M; a <= M; ++a) {
    extent[a + M] = static_cast<int>(std::floor(std::sqrt(double(M) * M - double(a) * a)));
    for (int b = -M; b <= M; ++b)
      f[(a + M) * W + (b + M)] = problem_value(p, std::hypot(double(a), double(b)) / M);
  }
  const double scale = std::pow(0.5 * N, alpha);
  std::vector<double> err(f.size(), 0.0);

  auto target = [&](int j, int k) {
    double acc = 0.0;
    const int n_lo = std::max(-N, -((M + j) / stride)), n_hi = std::min(N, (M - j) / stride);
    for (int n = n_lo; n <= n_hi; ++n) {
      const int a = j + stride * n;
      const int e = extent[a + M];
      // k + stride m in [-e, e]
      const int m_lo = std::max(-N, static_cast<int>(std::ceil(double(-e - k) / stride)));
      const int m_hi = std::min(N, static_cast<int>(std::floor(double(e - k) / stride)));
      const double* row = &f[(a + M) * W + (k + M)];
      const double* hs = &s.c[(n + N) * (2 * N + 1) + N];
      double racc = 0.0;
      for (int m = m_lo; m <= m_hi; ++m) racc += hs[m] * row[stride * m];
      acc += racc;
    }
    return std::abs(ref[(j + M) * W + (k + M)] - scale * acc);
  };

  const unsigned nt = thread_count(threads);
  parallel(nt, [&](unsigned t) {
    for (int j = static_cast<int>(t); j <= M; j += static_cast<int>(nt))
      for (int k = 0; k <= j; ++k) {
        const double e = target(j, k);
        for (int sj : {-1, 1})
          for (int sk : {-1, 1}) {
            err[(sj * j + M) * W + (sk * k + M)] = e;
            err[(sk * k + M) * W + (sj * j + M)] = e;
          }
      }
  });
  return err;
}

ConvergenceReport run_convergence(Problem p, Method m, double alpha, int levels, int n_max,
                                  const BenchConfig& cfg) {
  if (levels < 1) throw ValidationError("run_convergence: need at least one level");
  if (n_max < 16 || (n_max & (n_max - 1)) != 0)
    throw ValidationError("run_convergence: n_max must be a power of two >= 16");
  if ((16 << (levels - 1)) > n_max)
    throw ValidationError(fmt::format("run_convergence: {} levels need n_max >= {}", levels,
                                      16 << (levels - 1)));
  ConvergenceReport rep;
  rep.alpha = alpha;
  rep.method = method_name(m);
  rep.problem = problem_name(p);
  rep.n_max = n_max;
  rep.config = fmt::format(
      "n_c={} n_q={} integrator={} spacing=2/N grid=j/n_max norm=1/(2n_max)^2 "
      "halo=zero-outside-unit-disk",
      m == Method::sin_fft ? 1 : cfg.n_c, m == Method::sin_fft ? 2 : cfg.n_q,
      cfg.integrator.describe());

  const auto ref = reference_field(p, alpha, n_max);
  const int W = 2 * n_max + 1;
  for (int i = 0; i < levels; ++i) {
    const int N = 16 << i;
    const auto s = method_stencil(m, alpha, N, cfg);
    const auto err = error_field(p, s, alpha, n_max, ref, cfg.threads);
    LevelResult lr{i, N, 0.0, 0};
    // canonical octant in fixed order, weighted by multiplicity
    for (int j = 0; j <= n_max; ++j)
      for (int k = 0; k <= j; ++k) {
        const double e = err[(j + n_max) * W + (k + n_max)];
        const int mult = canonical_multiplicity(j, k);
        if (std::isnan(e))
          lr.excluded += mult;
        else
          lr.E += mult * e;
      }
    lr.E /= 4.0 * n_max * n_max;  // mean over the grid
    rep.levels.push_back(lr);
  }
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i)
    rep.rates.push_back(std::log2(rep.levels[i].E / rep.levels[i + 1].E));
  return rep;
}

void write_report_csv(std::ostream& os, const ConvergenceReport& r) {
  os << "# problem=" << r.problem << "\n# n_max=" << r.n_max << "\n# config=" << r.config << "\n";
  os << "alpha,method,level,N,E,r\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const auto& l = r.levels[i];
    os << fmt::format("{:.17g},{},{},{},{:.17g},", r.alpha, r.method, l.level, l.N, l.E);
    if (i < r.rates.size()) os << fmt::format("{:.17g}", r.rates[i]);
    os << '\n';
  }
}

void write_report_json(std::ostream& os, const ConvergenceReport& r) {
  nlohmann::json j;
  j["alpha"] = r.alpha;
  j["method"] = r.method;
  j["problem"] = r.problem;
  j["n_max"] = r.n_max;
  j["config"] = r.config;
  j["levels"] = nlohmann::json::array();
  for (const auto& l : r.levels)
    j["levels"].push_back({{"level", l.level}, {"N", l.N}, {"E", l.E}, {"excluded", l.excluded}});
  j["rates"] = r.rates;
  os << j.dump(2) << '\n';
}

ConvergenceReport read_report_csv(std::istream& is) {
  ConvergenceReport r;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      const std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
      if (key == "problem") r.problem = val;
      if (key == "n_max") r.n_max = std::stoi(val);
      if (key == "config") r.config = val;
      continue;
    }
    if (!header) {
      if (line != "alpha,method,level,N,E,r") throw ValidationError("report csv: bad header");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() < 5) throw ValidationError("report csv: short row");
    r.alpha = std::strtod(f[0].c_str(), nullptr);
    r.method = f[1];
    r.levels.push_back({std::stoi(f[2]), std::stoi(f[3]), std::strtod(f[4].c_str(), nullptr), 0});
    if (f.size() > 5 && !f[5].empty()) r.rates.push_back(std::strtod(f[5].c_str(), nullptr));
  }
  return r;
}

ConvergenceReport read_report_json(std::istream& is) {
  const auto j = nlohmann::json::parse(is);
  ConvergenceReport r;
  r.alpha = j.at("alpha");
  r.method = j.at("method");
  r.problem = j.at("problem");
  r.n_max = j.at("n_max");
  r.config = j.at("config");
  for (const auto& l : j.at("levels"))
    r.levels.push_back({l.at("level"), l.at("N"), l.at("E"), l.at("excluded")});
  r.rates = j.at("rates").get<std::vector<double>>();
  return r;
}

IsotropyScore isotropy_score(const std::vector<double>& field, int N, double r_lo, double r_hi,
                             double width) {
  const int W = 2 * N + 1;
  if (field.size() != static_cast<std::size_t>(W) * W)
    throw ValidationError("isotropy_score: field size does not match N");
  const int bins = static_cast<int>(std::floor((r_hi - r_lo) / width + 1e-9));
  std::vector<double> sum(bins, 0.0), sum2(bins, 0.0);
  std::vector<long> cnt(bins, 0);
  for (int j = -N; j <= N; ++j)
    for (int k = -N; k <= N; ++k) {
      const double r = std::hypot(double(j), double(k)) / N;
      const int b = static_cast<int>(std::floor((r - r_lo) / width));
      if (r < r_lo || b < 0 || b >= bins) continue;
      const double v = field[(j + N) * W + (k + N)];
      if (std::isnan(v)) continue;
      sum[b] += v;
      sum2[b] += v * v;
      ++cnt[b];
    }
  IsotropyScore s;
  for (int b = 0; b < bins; ++b) {
    s.r_inner.push_back(r_lo + b * width);
    if (cnt[b] < 2 || sum[b] == 0.0) {
      s.score.push_back(0.0);
      continue;
    }
    const double mean = sum[b] / cnt[b];
    const double var = std::max(0.0, sum2[b] / cnt[b] - mean * mean);
    s.score.push_back(std::sqrt(var) / std::abs(mean));
  }
  return s;
}

std::vector<IsotropyRun> run_isotropy(Problem p, double alpha, int N,
                                      const std::vector<IsotropySetting>& settings,
                                      const BenchConfig& cfg) {
  const auto ref = reference_field(p, alpha, N);
  std::vector<IsotropyRun> out;
  for (const auto& st : settings) {
    BenchConfig c = cfg;
    c.n_c = st.n_c;
    c.n_q = st.n_q;
    const auto s = method_stencil(Method::he_filon, alpha, N, c);
    IsotropyRun run;
    run.setting = st;
    run.field = error_field(p, s, alpha, N, ref, cfg.threads);
    run.score = isotropy_score(run.field, N);
    out.push_back(std::move(run));
  }
  return out;
}

double fraction_improved(const IsotropyScore& a, const IsotropyScore& b) {
  if (a.score.size() != b.score.size() || a.score.empty())
    throw ValidationError("fraction_improved: annulus sets differ");
  int better = 0;
  for (std::size_t i = 0; i < a.score.size(); ++i)
    if (b.score[i] < a.score[i]) ++better;
  return double(better) / a.score.size();
}

void write_pgm(std::ostream& os, const std::vector<double>& field, int N, double& scale_out) {
  const int W = 2 * N + 1;
  double mx = 0.0;
  for (double v : field)
    if (std::isfinite(v)) mx = std::max(mx, std::abs(v));
  scale_out = mx;
  os << "P2\n" << W << ' ' << W << "\n255\n";
  for (int j = 0; j < W; ++j) {
    for (int k = 0; k < W; ++k) {
      const double v = field[j * W + k];
      const int g = (mx > 0 && std::isfinite(v)) ? static_cast<int>(std::lround(255.0 * std::abs(v) / mx)) : 0;
      os << g << (k + 1 < W ? ' ' : '\n');
    }
  }
}

void write_field_csv(std::ostream& os, const std::vector<double>& field, int N) {
  const int W = 2 * N + 1;
  for (int j = 0; j < W; ++j) {
    for (int k = 0; k < W; ++k) os << (k ? "," : "") << fmt::format("{:.17g}", field[j * W + k]);
    os << '\n';
  }
}

}  // namespace fraclap
