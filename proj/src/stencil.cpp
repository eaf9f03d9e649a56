#include "fraclap/stencil.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "fraclap/error.hpp"
#include "fraclap/hermite.hpp"

namespace fraclap {

Stencil make_stencil(int dim, int half) {
  if (dim != 1 && dim != 2) throw ValidationError("stencil: dimension must be 1 or 2");
  if (half < 0) throw ValidationError("stencil: negative half-width");
  Stencil s;
  s.dim = dim;
  s.half = half;
  std::size_t n = 2 * half + 1;
  s.c.assign(dim == 1 ? n : n * n, 0.0);
  return s;
}

namespace {

void check_order(int n_q, int n_c) {
  if (n_c < 1) throw ValidationError("integer stencil: n_c must be >= 1");
  if (n_q < 2 * n_c)
    throw ValidationError(fmt::format(
        "integer stencil: n_q={} too small for n_c={} (need n_q >= {})", n_q, n_c, 2 * n_c));
}

Stencil trim(const Stencil& s) {
  int h = s.half;
  auto ring_zero = [&](int r) {
    if (s.dim == 1) return s.at(r) == 0.0 && s.at(-r) == 0.0;
    for (int t = -r; t <= r; ++t)
      if (s.at(r, t) != 0.0 || s.at(-r, t) != 0.0 || s.at(t, r) != 0.0 || s.at(t, -r) != 0.0)
        return false;
    return true;
  };
  while (h > 1 && ring_zero(h)) --h;
  if (h == s.half) return s;
  Stencil t = make_stencil(s.dim, h);
  t.meta = s.meta;
  for (int i = -h; i <= h; ++i) {
    if (s.dim == 1) {
      t.at(i) = s.at(i);
    } else {
      for (int j = -h; j <= h; ++j) t.at(i, j) = s.at(i, j);
    }
  }
  return t;
}

}  // namespace

Stencil build_integer_laplacian(const GridQuadrature1D& rule, int n_c) {
  check_order(rule.n_q, n_c);
  Stencil s = make_stencil(1, rule.n_q);
  s.meta = {OrderKind::integer, 2.0, n_c, rule.n_q, rule.a, "hermite"};
  const double a2 = rule.a * rule.a;
  for (int i = 0; i <= rule.n_q; ++i) {
    const double v = i * rule.a;
    const double c = a2 * rule.w[i] * laplacian_kernel(std::span(&v, 1), n_c);
    s.at(i) = s.at(-i) = c;
  }
  return s;
}

Stencil build_integer_laplacian(const SparseWeights2D& rule, int n_c) {
  check_order(rule.n_q, n_c);
  Stencil s = make_stencil(2, rule.n_q);
  s.meta = {OrderKind::integer, 2.0, n_c, rule.n_q, rule.a, "hermite"};
  const double a2 = rule.a * rule.a;
  for (const auto& [node, w] : rule.entries) {
    const auto [i, j] = node;
    const double v[2] = {i * rule.a, j * rule.a};
    const double c = a2 * w * laplacian_kernel(v, n_c);
    for (int si : {-1, 1})
      for (int sj : {-1, 1}) {
        s.at(si * i, sj * j) = c;
        s.at(sj * j, si * i) = c;
      }
  }
  return s;
}

Stencil hermite_laplacian(int dim, int n_c, int n_q, double a) {
  if (a <= 0.0) {
    if (n_q < 2) a = 1.0;
    else a = solve_elimination_scale(n_q % 2 == 0 ? n_q : n_q - 1);
  }
  // eliminated outer weights come out ~1e-17 rather than exactly zero
  const double tiny = 1e-13;
  if (dim == 1) {
    auto rule = grid_weights_1d(n_q, a);
    for (double& w : rule.w)
      if (std::abs(w) < tiny) w = 0.0;
    return trim(build_integer_laplacian(rule, n_c));
  }
  auto rule = implicit_weights(n_q, a);
  for (auto& [node, w] : rule.entries)
    if (std::abs(w) < tiny) w = 0.0;
  return trim(build_integer_laplacian(rule, n_c));
}

Stencil classic_laplacian(int dim) {
  Stencil s = make_stencil(dim, 1);
  s.meta = {OrderKind::integer, 2.0, 1, 2, 1.0, "classic"};
  if (dim == 1) {
    s.at(-1) = s.at(1) = 1.0;
    s.at(0) = -2.0;
  } else {
    s.at(-1, 0) = s.at(1, 0) = s.at(0, -1) = s.at(0, 1) = 1.0;
    s.at(0, 0) = -4.0;
  }
  return s;
}

double dtft(const Stencil& s, std::span<const double> k) {
  if (static_cast<int>(k.size()) != s.dim) throw ValidationError("dtft: frequency dimension");
  double sum = 0.0;
  if (s.dim == 1) {
    for (int i = -s.half; i <= s.half; ++i) sum += s.at(i) * std::cos(i * k[0]);
    return sum;
  }
  for (int i = -s.half; i <= s.half; ++i)
    for (int j = -s.half; j <= s.half; ++j)
      sum += s.at(i, j) * std::cos(i * k[0]) * std::cos(j * k[1]);
  return sum;
}

double dtft_stable(const Stencil& s, std::span<const double> k) {
  if (static_cast<int>(k.size()) != s.dim) throw ValidationError("dtft: frequency dimension");
  // cos x - 1 = -2 sin^2(x/2);  cos x cos y - 1 = -(sin^2((x+y)/2) + sin^2((x-y)/2))
  double sum = 0.0;
  if (s.dim == 1) {
    for (int i = 1; i <= s.half; ++i) {
      const double sn = std::sin(0.5 * i * k[0]);
      sum -= 4.0 * s.at(i) * sn * sn;
    }
    return sum;
  }
  for (int i = -s.half; i <= s.half; ++i)
    for (int j = -s.half; j <= s.half; ++j) {
      const double c = s.at(i, j);
      if (c == 0.0 || (i == 0 && j == 0)) continue;
      const double p = std::sin(0.5 * (i * k[0] + j * k[1]));
      const double m = std::sin(0.5 * (i * k[0] - j * k[1]));
      sum -= c * (p * p + m * m);
    }
  return sum;
}

ProbeResult convergence_probe(const Stencil& s,
                              const std::function<double(std::span<const double>)>& f,
                              double exact, std::span<const double> point,
                              std::span<const double> hs) {
  if (static_cast<int>(point.size()) != s.dim)
    throw ValidationError("convergence_probe: point dimension");
  ProbeResult res;
  double x[2];
  for (double h : hs) {
    double acc = 0.0, mag = 0.0;
    auto add = [&](double c) {
      if (c == 0.0) return;
      const double v = c * f(std::span<const double>(x, s.dim));
      acc += v;
      mag += std::abs(v);
    };
    if (s.dim == 1) {
      for (int i = -s.half; i <= s.half; ++i) {
        x[0] = point[0] + h * i;
        add(s.at(i));
      }
    } else {
      for (int i = -s.half; i <= s.half; ++i)
        for (int j = -s.half; j <= s.half; ++j) {
          x[0] = point[0] + h * i;
          x[1] = point[1] + h * j;
          add(s.at(i, j));
        }
    }
    const double err = std::abs(acc / (h * h) - exact);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * mag / (h * h);
    res.h.push_back(h);
    res.error.push_back(err);
    if (res.usable == static_cast<int>(res.h.size()) - 1 && err > floor) ++res.usable;
  }
  const int n = res.usable;
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
      const double lx = std::log(res.h[i]), ly = std::log(res.error[i]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return res;
}

namespace {
const char* kind_name(OrderKind k) { return k == OrderKind::integer ? "integer" : "fractional"; }
}  // namespace

void write_stencil(std::ostream& os, const Stencil& s) {
  os << "# fraclap-stencil 1\n";
  os << fmt::format("# dim={}\n# half_width={}\n# kind={}\n", s.dim, s.half, kind_name(s.meta.kind));
  os << fmt::format("# alpha={:.17g}\n# n_c={}\n# n_q={}\n# a={:.17g}\n# method={}\n",
                    s.meta.alpha, s.meta.n_c, s.meta.n_q, s.meta.a, s.meta.method);
  const int w = s.width();
  const int rows = s.dim == 1 ? 1 : w;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < w; ++c) os << (c ? "," : "") << fmt::format("{:.17g}", s.c[r * w + c]);
    os << '\n';
  }
}

Stencil read_stencil(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::string line;
  std::vector<double> values;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# fraclap-stencil", 0) == 0) {
        header_seen = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) values.push_back(std::strtod(tok.c_str(), nullptr));
  }
  if (!header_seen) throw ValidationError("read_stencil: missing format header");
  try {
    Stencil s = make_stencil(std::stoi(meta.at("dim")), std::stoi(meta.at("half_width")));
    if (values.size() != s.c.size())
      throw ValidationError(fmt::format("read_stencil: expected {} coefficients, got {}",
                                        s.c.size(), values.size()));
    s.c = values;
    s.meta.kind = meta.at("kind") == "fractional" ? OrderKind::fractional : OrderKind::integer;
    s.meta.alpha = std::strtod(meta.at("alpha").c_str(), nullptr);
    s.meta.n_c = std::stoi(meta.at("n_c"));
    s.meta.n_q = std::stoi(meta.at("n_q"));
    s.meta.a = std::strtod(meta.at("a").c_str(), nullptr);
    s.meta.method = meta.at("method");
    return s;
  } catch (const std::out_of_range&) {
    throw ValidationError("read_stencil: incomplete metadata header");
  }
}

}  // namespace fraclap
