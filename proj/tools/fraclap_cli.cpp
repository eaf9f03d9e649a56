#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fraclap/bench.hpp"
#include "fraclap/error.hpp"
#include "fraclap/fractional.hpp"
#include "fraclap/grid_quadrature.hpp"
#include "fraclap/reference.hpp"
#include "fraclap/smolyak2d.hpp"
#include "fraclap/stencil.hpp"

using namespace fraclap;
using nlohmann::json;

namespace {

struct Options {
  double alpha = 1.0;
  int nc = -1;
  int nq = -1;
  int dim = 1;
  int half_width = 8;
  std::string method = "he-filon";
  int kg = -1;
  int nf = -1;
  int nt = 0;
  int levels = 3;
  int nmax = 128;
  bool full = false;
  std::string problem = "f1";
  std::string out;
  std::string format = "csv";
  double a = 0.0;
  std::string construction = "implicit";
  std::string settings = "2:4,2:5";
  unsigned threads = 0;
};

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::function<void(std::ostream&)>& body) {
  if (o.out.empty()) {
    body(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw ValidationError("cannot open '" + o.out + "' for writing");
  body(f);
}

int n_c_or(const Options& o, int fallback) { return o.nc > 0 ? o.nc : fallback; }
int n_q_or(const Options& o, int n_c) { return o.nq >= 0 ? o.nq : 2 * n_c; }

// Scale eliminating the outermost weight of the even part of n_q.
double default_scale(int n_q) {
  const int even = n_q - n_q % 2;
  return even >= 2 ? solve_elimination_scale(even) : 1.0;
}

IntegratorConfig integrator(const Options& o) {
  IntegratorConfig c;
  c.k_g = o.kg;
  c.n_f = o.nf;
  c.n_t = o.nt;
  return c;
}

void write_stencil_as(std::ostream& os, const Stencil& s, const std::string& format) {
  if (format == "csv") {
    write_stencil(os, s);
    return;
  }
  json j = {{"dim", s.dim},       {"half_width", s.half}, {"alpha", s.meta.alpha},
            {"n_c", s.meta.n_c},  {"n_q", s.meta.n_q},    {"a", s.meta.a},
            {"method", s.meta.method},
            {"kind", s.meta.kind == OrderKind::integer ? "integer" : "fractional"},
            {"coefficients", s.c}};
  os << j.dump(2) << '\n';
}

int run_weights_1d(const Options& o) {
  if (o.nq < 0) throw ValidationError("weights-1d: --nq is required");
  const double a = o.a > 0 ? o.a : default_scale(o.nq);
  const auto rule = grid_weights_1d(o.nq, a);
  const auto res = verify_orthogonality_1d(rule);
  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      os << json{{"n_q", rule.n_q}, {"a", rule.a}, {"weights", rule.w}, {"residual", res.max()}}.dump(2)
         << '\n';
      return;
    }
    os << fmt::format("# n_q={}\n# a={:.17g}\n# residual={:.3e}\nk,node,weight\n", rule.n_q, rule.a,
                      res.max());
    for (std::size_t k = 0; k < rule.w.size(); ++k)
      os << fmt::format("{},{:.17g},{:.17g}\n", k, k * rule.a, rule.w[k]);
  });
  return 0;
}

int run_weights_2d(const Options& o) {
  if (o.nq < 0) throw ValidationError("weights-2d: --nq is required");
  const double a = o.a > 0 ? o.a : default_scale(o.nq);
  SparseWeights2D w;
  if (o.construction == "implicit")
    w = implicit_weights(o.nq, a);
  else if (o.construction == "smolyak")
    w = smolyak_weights(o.nq, a);
  else
    throw ValidationError("weights-2d: construction must be implicit or smolyak");
  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      json e = json::array();
      for (const auto& [node, v] : w.entries) e.push_back({{"i", node.first}, {"j", node.second}, {"w", v}});
      os << json{{"n_q", w.n_q}, {"a", w.a}, {"construction", o.construction}, {"entries", e}}.dump(2)
         << '\n';
      return;
    }
    os << fmt::format("# n_q={}\n# a={:.17g}\n# construction={}\ni,j,orbit,weight\n", w.n_q, w.a,
                      o.construction);
    for (const auto& [node, v] : w.entries)
      os << fmt::format("{},{},{},{:.17g}\n", node.first, node.second,
                        orbit_size(node.first, node.second), v);
  });
  return 0;
}

int run_stencil(const Options& o) {
  const int n_c = n_c_or(o, 1);
  const auto s = hermite_laplacian(o.dim, n_c, n_q_or(o, n_c), o.a);
  emit(o, [&](std::ostream& os) { write_stencil_as(os, s, o.format); });
  return 0;
}

int run_frac_stencil(const Options& o) {
  const Method m = parse_method(o.method);
  const int n_c = n_c_or(o, 1);
  const int n_q = n_q_or(o, n_c);
  Stencil base = m == Method::sin_fft ? classic_laplacian(o.dim) : hermite_laplacian(o.dim, n_c, n_q);
  IntegratorConfig ic = integrator(o);
  switch (m) {
    case Method::sin_fft:
    case Method::he_fft: ic.method = Integrator::fft; break;
    case Method::he_tanhsinh: ic.method = Integrator::tanh_sinh; break;
    case Method::he_filon:
      ic.method = Integrator::filon;
      // small half-widths need more interpolation nodes than the order rule
      if (ic.n_f < 0) ic.n_f = std::max(default_nf(base.meta.n_q, base.meta.n_c), 6);
      break;
  }
  const auto s = build_fractional(base, o.alpha, o.half_width, ic);
  emit(o, [&](std::ostream& os) { write_stencil_as(os, s, o.format); });
  return 0;
}

BenchConfig bench_config(const Options& o) {
  BenchConfig c;
  c.n_c = n_c_or(o, 2);
  c.n_q = n_q_or(o, c.n_c);
  c.integrator = integrator(o);
  c.threads = o.threads;
  return c;
}

int run_convergence_cmd(const Options& o) {
  const int levels = o.full ? 5 : o.levels;
  const int nmax = o.full ? 256 : o.nmax;
  const auto rep = run_convergence(parse_problem(o.problem), parse_method(o.method), o.alpha, levels,
                                   nmax, bench_config(o));
  emit(o, [&](std::ostream& os) {
    if (o.format == "json")
      write_report_json(os, rep);
    else
      write_report_csv(os, rep);
  });
  if (!o.out.empty())
    for (std::size_t i = 0; i < rep.levels.size(); ++i)
      std::cout << fmt::format("N={:4d} E={:.4e}{}\n", rep.levels[i].N, rep.levels[i].E,
                               i < rep.rates.size() ? fmt::format(" r={:.3f}", rep.rates[i]) : "");
  return 0;
}

std::vector<IsotropySetting> parse_settings(const std::string& s) {
  std::vector<IsotropySetting> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ValidationError("isotropy: settings look like 2:4,2:5");
    out.push_back({std::stoi(tok.substr(0, colon)), std::stoi(tok.substr(colon + 1))});
  }
  if (out.empty()) throw ValidationError("isotropy: no settings");
  return out;
}

int run_isotropy_cmd(const Options& o) {
  const auto settings = parse_settings(o.settings);
  const Problem p = parse_problem(o.problem);
  const int N = o.half_width;
  const auto runs = run_isotropy(p, o.alpha, N, settings, bench_config(o));
  for (const auto& r : runs) {
    const auto& sc = r.score.score;
    const double mean = std::accumulate(sc.begin(), sc.end(), 0.0) / sc.size();
    std::cout << fmt::format("n_c={} n_q={} N_iso={} mean isotropy score {:.4f}\n", r.setting.n_c,
                             r.setting.n_q, r.setting.n_iso_formula(), mean);
    if (o.out.empty()) continue;
    const std::string stem = fmt::format("{}_nc{}_nq{}", o.out, r.setting.n_c, r.setting.n_q);
    double scale = 0;
    {
      std::ofstream f(stem + ".pgm");
      write_pgm(f, r.field, N, scale);
    }
    {
      std::ofstream f(stem + ".csv");
      write_field_csv(f, r.field, N);
    }
    std::ofstream f(stem + ".json");
    f << json{{"problem", o.problem},
              {"alpha", o.alpha},
              {"N", N},
              {"n_c", r.setting.n_c},
              {"n_q", r.setting.n_q},
              {"n_iso", r.setting.n_iso_formula()},
              {"pgm_max", scale},
              {"r_inner", r.score.r_inner},
              {"score", r.score.score}}
             .dump(2)
      << '\n';
  }
  for (std::size_t i = 1; i < runs.size(); ++i)
    std::cout << fmt::format("annuli improved from setting 1 to {}: {:.1f}%\n", i + 1,
                             100 * fraction_improved(runs[0].score, runs[i].score));
  return 0;
}

int run_selftest() {
  int failed = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& f) {
    bool ok = false;
    try {
      ok = f();
    } catch (const std::exception& e) {
      std::cout << "  (" << e.what() << ")\n";
    }
    std::cout << (ok ? "PASS " : "FAIL ") << name << '\n';
    if (!ok) ++failed;
  };
  check("1D grid weights satisfy the moment conditions", [] {
    for (int nq = 0; nq <= 8; ++nq)
      if (verify_orthogonality_1d(grid_weights_1d(nq, default_scale(nq))).max() > 1e-10) return false;
    return true;
  });
  check("2D implicit and Smolyak weights agree", [] {
    for (int nq = 2; nq <= 6; ++nq) {
      const double a = default_scale(nq);
      const auto x = implicit_weights(nq, a), y = smolyak_weights(nq, a);
      for (const auto& [node, v] : x.entries)
        if (std::abs(v - y.at(node.first, node.second)) > 1e-9) return false;
    }
    return true;
  });
  check("integer stencils are zero-sum with a negative symbol", [] {
    for (int d = 1; d <= 2; ++d)
      for (int nc = 1; nc <= 2; ++nc) {
        const auto s = hermite_laplacian(d, nc, 2 * nc);
        if (std::abs(std::accumulate(s.c.begin(), s.c.end(), 0.0)) > 1e-10) return false;
        const double k[2] = {1.0, 0.5};
        if (!(dtft_stable(s, std::span<const double>(k, d)) < 0)) return false;
      }
    return true;
  });
  check("1D fractional coefficients match the closed form", [] {
    IntegratorConfig c;
    c.method = Integrator::filon;
    c.n_f = 4;
    const auto s = build_fractional(hermite_laplacian(1, 1, 2), 1.5, 64, c);
    for (int n = 0; n <= 32; ++n)
      if (std::abs(s.at(n) - closed_form_1d(1.5, n)) > 1e-8) return false;
    return true;
  });
  check("alpha = 2 reproduces the base stencil", [] {
    const auto base = hermite_laplacian(1, 2, 4);
    IntegratorConfig c;
    c.method = Integrator::tanh_sinh;
    const auto s = build_fractional(base, 2.0, 16, c);
    for (int i = -16; i <= 16; ++i)
      if (std::abs(s.at(i) - (std::abs(i) <= base.half ? base.at(i) : 0.0)) > 1e-10) return false;
    return true;
  });
  check("reference solutions are continuous at r = 1", [] {
    for (Problem p : {Problem::f1, Problem::f2})
      for (double alpha : {0.5, 1.0, 1.5})
        if (std::abs(problem_frac_laplacian(p, 1 - 1e-7, alpha) -
                     problem_frac_laplacian(p, 1 + 1e-7, alpha)) > 1e-5)
          return false;
    return true;
  });
  check("He-Filon converges, Sin-FFT stalls", [] {
    const auto f = run_convergence(Problem::f1, Method::he_filon, 0.8, 2, 32);
    const auto s = run_convergence(Problem::f1, Method::sin_fft, 0.8, 2, 32);
    return f.rates[0] > 3.3 && std::abs(s.rates[0]) < 0.1;
  });
  check("report round trip", [] {
    const auto r = run_convergence(Problem::f2, Method::he_filon, 0.5, 2, 32);
    std::stringstream ss;
    write_report_csv(ss, r);
    const auto back = read_report_csv(ss);
    return back.levels[1].E == r.levels[1].E && back.rates == r.rates;
  });
  std::cout << fmt::format("{} of 8 checks passed\n", 8 - failed);
  return failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional Laplacian stencils from Hermite quadrature"};
  app.require_subcommand(1);
  Options o;

  auto format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out", o.out, "Output path (default: stdout)");
  };
  auto stencil_flags = [&](CLI::App* c) {
    c->add_option("--nc", o.nc, "Consistency order N_c")->check(CLI::PositiveNumber);
    c->add_option("--nq", o.nq, "Quadrature order N_q (default 2 N_c)")->check(CLI::NonNegativeNumber);
  };
  auto integrator_flags = [&](CLI::App* c) {
    c->add_option("--method", o.method, "Stencil method")
        ->check(CLI::IsMember({"sin-fft", "he-fft", "he-filon", "he-tanhsinh"}));
    c->add_option("--kg", o.kg, "Filon region width in sample steps (-1: automatic)");
    c->add_option("--nf", o.nf, "Filon interpolation order (-1: automatic)");
    c->add_option("--nt", o.nt, "Tanh-sinh node count (0: automatic)");
  };

  auto* w1 = app.add_subcommand("weights-1d", "1D grid quadrature weights");
  w1->add_option("--nq", o.nq, "Quadrature order")->required();
  w1->add_option("--a", o.a, "Lattice scale (default: eliminating scale)");
  format(w1);

  auto* w2 = app.add_subcommand("weights-2d", "2D sparse grid quadrature weights");
  w2->add_option("--nq", o.nq, "Quadrature order")->required();
  w2->add_option("--a", o.a, "Lattice scale (default: eliminating scale)");
  w2->add_option("--construction", o.construction, "implicit or smolyak")
      ->check(CLI::IsMember({"implicit", "smolyak"}));
  format(w2);

  auto* st = app.add_subcommand("stencil", "Integer-order Hermite Laplacian stencil");
  stencil_flags(st);
  st->add_option("--dim", o.dim, "Dimension")->check(CLI::Range(1, 2));
  st->add_option("--a", o.a, "Lattice scale (default: eliminating scale)");
  format(st);

  auto* fs = app.add_subcommand("frac-stencil", "Fractional Laplacian stencil");
  fs->add_option("--alpha", o.alpha, "Order alpha in (0, 2]")->required();
  fs->add_option("--dim", o.dim, "Dimension")->check(CLI::Range(1, 2));
  fs->add_option("--half-width", o.half_width, "Stencil half-width N")->check(CLI::PositiveNumber);
  stencil_flags(fs);
  integrator_flags(fs);
  format(fs);

  auto* cv = app.add_subcommand("convergence", "Convergence benchmark on f1 or f2");
  cv->add_option("--alpha", o.alpha, "Order alpha in (0, 2]")->required();
  cv->add_option("--problem", o.problem, "Benchmark function")->check(CLI::IsMember({"f1", "f2"}));
  cv->add_option("--levels", o.levels, "Number of levels (N_i = 16 * 2^i)");
  cv->add_option("--nmax", o.nmax, "Evaluation grid size N_max");
  cv->add_flag("--full", o.full, "Full scale: N_max = 256, five levels");
  cv->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  stencil_flags(cv);
  integrator_flags(cv);
  format(cv);

  auto* is = app.add_subcommand("isotropy", "Error-field isotropy comparison");
  is->add_option("--alpha", o.alpha, "Order alpha in (0, 2]")->required();
  is->add_option("--problem", o.problem, "Benchmark function")->check(CLI::IsMember({"f1", "f2"}));
  is->add_option("--half-width", o.half_width, "Stencil half-width N (default 64)");
  is->add_option("--settings", o.settings, "Comma-separated n_c:n_q pairs, first is the baseline");
  is->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  integrator_flags(is);
  is->add_option("--out", o.out, "Output stem for .pgm/.csv/.json field files");

  auto* self = app.add_subcommand("selftest", "Run the invariant suite");

  // isotropy defaults to N = 64 unless given
  is->preparse_callback([&](std::size_t) { o.half_width = 64; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*w1) return run_weights_1d(o);
    if (*w2) return run_weights_2d(o);
    if (*st) return run_stencil(o);
    if (*fs) return run_frac_stencil(o);
    if (*cv) return run_convergence_cmd(o);
    if (*is) return run_isotropy_cmd(o);
    if (*self) return run_selftest();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
