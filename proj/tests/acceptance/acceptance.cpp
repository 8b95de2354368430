// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hgeo/adiabatic.hpp"
#include "hgeo/basis.hpp"
#include "hgeo/dynamics.hpp"
#include "hgeo/error.hpp"
#include "hgeo/hypergeometry.hpp"
#include "hgeo/models.hpp"
#include "hgeo/noise.hpp"
#include "hgeo/runtime.hpp"
#include "hgeo/signal.hpp"
#include "hgeo/synthesis.hpp"

using namespace hgeo;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  std::string what;
  bool ok;
  std::string detail;
};

class Criterion {
 public:
  void add(std::string what, bool ok, std::string detail = {}) {
    checks_.push_back({std::move(what), ok, std::move(detail)});
  }
  bool passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok; });
  }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::vector<Check> checks_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ParametricModel lz() { return build_model("landau_zener", {{"x", 1.0}}); }

PulseProfile lz_member(double n_plus, int samples = 1024) {
  const auto f = lz_family_member(n_plus);
  return synthesize_pulse(lz(), f.alpha, f.beta, 0, -10.0, 10.0, samples);
}

ParametricModel shuttling() {
  return build_model("shuttling",
                     {{"t_c", 1.0}, {"Delta_L", 1.0}, {"Delta_R", 2.0}, {"phi_L", 0.0}, {"phi_R", 0.8 * kPi}});
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] < v[i - 1] && v[i] <= v[i + 1]) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------

void qubit_closed_forms(Criterion& c) {
  const auto q = build_model("qubit_sphere");
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> a(-1.0, 5.0), b(-1.0, 6.0), th(0.02, kPi - 0.02), ph(0.0, 2 * kPi);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double al = a(rng), be = b(rng);
    const Params p{th(rng), ph(rng)};
    const auto s = spectrum(q, p);
    worst = std::max(worst, rel(hypermetric(q, s, p, al, be, 0, 0), std::pow(2.0, -al)));
    worst = std::max(worst, rel(hypermetric(q, s, p, al, be, 0, 1), std::pow(std::sin(p[0]), be) * std::pow(2.0, -al)));
  }
  c.add("hypermetric = diag(1, sin^b)/2^a at 50 points", worst < 1e-8, fmt("max rel %.2e", worst));

  const double v22 = sphere_volume(2.0, 2.0);
  c.add("Vol(2,2) = pi", std::abs(v22 - kPi) < 1e-8, fmt("|Vol - pi| = %.2e", std::abs(v22 - kPi)));

  double vw = 0.0;
  for (double al : {-1.0, 0.0, 1.5, 3.0, 5.0})
    for (double be : {-0.9, -0.5, 0.0, 1.0, 2.0, 3.5, 6.0})
      vw = std::max(vw, rel(sphere_volume_numeric(al, be), sphere_volume(al, be)));
  c.add("volume closed form vs quadrature on [-1,5]x(-1,6]", vw < 1e-6, fmt("max rel %.2e", vw));
}

void lz_metric_and_delta(Criterion& c) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> z(-10.0, 10.0), a(-5.0, 5.0);
  const auto m = lz();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double zz = z(rng), al = a(rng), be = a(rng);
    worst = std::max(worst, rel(hypermetric(m, zz, al, be, 0), lz_metric_closed_form(al, be, 1.0, zz)));
  }
  c.add("LZ metric closed form at 100 points", worst < 1e-8, fmt("max rel %.2e", worst));

  const auto r = build_model("rescaled_lz", {{"x", 1.0}});
  double dw = 0.0;
  for (double be : {0.0, 2.0})
    for (double nm : {-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 3.3, 4.5, 6.0}) {
      const double al = be + 2.0 * nm;
      dw = std::max(dw, rel(hyper_adiabaticity(r, al, be, 0, 0.0, kPi), rescaled_lz_delta_closed_form(al, be)));
    }
  c.add("rescaled LZ delta vs Gamma ratio for n- in (-1,6]", dw < 1e-8, fmt("max rel %.2e", dw));
}

void degeneracy(Criterion& c) {
  const auto m = lz();
  const auto p40 = synthesize_pulse(m, 4, 0, 0, -10, 10, 1024);
  const auto p22 = synthesize_pulse(m, 2, 2, 0, -10, 10, 1024);
  const auto p04 = synthesize_pulse(m, 0, 4, 0, -10, 10, 1024);
  double sup = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = i / 4000.0;
    sup = std::max({sup, std::abs(p40.value(t) - p22.value(t)), std::abs(p04.value(t) - p22.value(t))});
  }
  c.add("(4,0), (2,2), (0,4) pulses agree", sup < 1e-8, fmt("sup norm %.2e", sup));

  std::vector<std::pair<double, double>> ab;
  for (double a : linspace(-5, 5, 11))
    for (double b : linspace(-5, 5, 11)) ab.emplace_back(a, b);
  const auto map = infidelity_map(m, ab, 0, -10, 10, linspace(0, 10, 50), 100.0, 1024, Exec::Parallel);
  std::map<long, std::pair<double, double>> diag;
  for (const auto& e : map) {
    const long k = std::lround(e.alpha + e.beta);
    auto it = diag.find(k);
    if (it == diag.end())
      diag[k] = {e.min_infidelity, e.min_infidelity};
    else
      it->second = {std::min(it->second.first, e.min_infidelity), std::max(it->second.second, e.min_infidelity)};
  }
  double spread = 0.0;
  for (const auto& [k, v] : diag) spread = std::max(spread, v.second - v.first);
  c.add("11x11 map constant along alpha+beta", spread < 1e-4, fmt("max spread %.2e", spread));
}

void resonances(Criterion& c) {
  const double step = 0.05;
  for (double n : {2.0, 3.0, 4.0}) {
    const auto p = lz_member(n);
    const auto rep = adiabatic_report(p, 5);
    const auto& res = rep.pairs.front().resonances;
    const double hi = res.back() + 1.0;
    std::vector<double> tf;
    for (int i = 1; i * step <= hi + 1e-12; ++i) tf.push_back(i * step);
    const auto s = sweep_tf(p, tf, std::nullopt, Exec::Parallel);
    const auto mins = local_minima(s.infidelity);
    double worst = 0.0;
    for (double t : res) {
      double d = INFINITY;
      for (auto i : mins) d = std::min(d, std::abs(tf[i] - t));
      worst = std::max(worst, d);
    }
    c.add("n+=" + fmt("%g", n) + " k<=5 predictions near simulated minima", worst <= step + 1e-12,
          fmt("worst distance %.3f (step %.2f)", worst, step));
  }
}

void adiabatic_bound(Criterion& c) {
  for (double n : {2.0, 3.0, 4.0}) {
    const auto p = lz_member(n);
    const auto rep = adiabatic_report(p);
    const auto tf = linspace(rep.t_adiab, 4.0 * rep.t_adiab, 60);
    const auto s = sweep_tf(p, tf, std::nullopt, Exec::Parallel);
    int bad = 0;
    double margin = INFINITY;
    for (std::size_t i = 0; i < tf.size(); ++i) {
      if (s.infidelity[i] > rep.bound(tf[i])) ++bad;
      margin = std::min(margin, rep.bound(tf[i]) - s.infidelity[i]);
    }
    c.add("n+=" + fmt("%g", n) + " infidelity <= 4 a0^2 (N-1)/t_f^2", bad == 0,
          fmt("violations %g, t_adiab %.3f, min margin %.2e", bad, rep.t_adiab, margin));
  }
}

void faquad_minimal(Criterion& c) {
  double best = INFINITY, arg = 0.0;
  for (int i = 0; i <= 24; ++i) {
    const double n = 0.25 * i;
    const double t = adiabatic_report(lz_member(n)).t_adiab;
    if (t < best) {
      best = t;
      arg = n;
    }
  }
  c.add("argmin t_adiab over n+ in [0,6]", std::abs(arg - 3.0) <= 0.25 + 1e-12,
        fmt("argmin n+ = %.2f, t_adiab = %.4f", arg, best));
}

void dephasing(Criterion& c) {
  const double t2 = 100.0;
  const auto np = linspace(0.0, 6.0, 13);
  const auto tf = linspace(0.25, 20.0, 80);
  std::vector<double> curve;
  for (double n : np) curve.push_back(sweep_tf(lz_member(n), tf, t2, Exec::Parallel).min_infidelity);
  const auto arg = static_cast<std::size_t>(std::min_element(curve.begin(), curve.end()) - curve.begin());
  c.add("min infidelity vs n+ has an interior optimum", arg > 0 && arg + 1 < curve.size(),
        fmt("optimum n+ = %.2f, infidelity %.3e", np[arg], curve[arg]));

  const auto pi = pi_pulse(lz(), 0, -10, 10, 256);
  auto fid = [&](double t) { return evolve_lindblad(pi, t, t2).fidelity; };
  const double h = 0.01;
  std::vector<double> grid, f;
  for (int i = 1; i * h <= 10.0 + 1e-12; ++i) {
    grid.push_back(i * h);
    f.push_back(-fid(i * h));
  }
  int found = 0;
  double worst = 0.0;
  std::string where;
  for (auto i : local_minima(f)) {
    double bt = grid[i], bf = -f[i];
    for (int j = -100; j <= 100; ++j) {
      const double t = grid[i] + j * h / 100.0;
      const double v = fid(t);
      if (v > bf) {
        bf = v;
        bt = t;
      }
    }
    const double bound = 0.5 * (1.0 + std::exp(-bt / (2.0 * t2)));
    const double gap = bound - bf;
    worst = std::max(worst, std::abs(gap));
    where += fmt(" t=%.3f gap=%.2e;", bt, gap);
    ++found;
  }
  c.add("pi-pulse resonances reach (1+e^{-t/2T2})/2 within 1e-4", found > 0 && worst <= 1e-4,
        fmt("%g maxima, worst %.2e:", found, worst) + where);
}

void robustness(Criterion& c) {
  const auto r = build_model("rescaled_lz", {{"x", 1.0}});
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0, 3.5})
    for (double th : linspace(0.05, kPi - 0.05, 41)) {
      if (std::abs(th - kPi / 2) < 1e-6) continue;
      worst = std::max(worst, std::abs(robustness_constraint(r, a, a, th).c));
    }
  c.add("|C| = 0 for alpha = beta on the rescaled LZ", worst < 1e-10, fmt("max |C| %.2e", worst));

  const auto p = synthesize_pulse(lz(), 2, 2, 0, -10, 10, 1024);
  // minimum over t_f per noise amplitude, each channel on its own
  const auto d = linspace(0.0, 0.1, 6);
  const auto tf = linspace(0.2, 10.0, 50);
  for (int axis = 0; axis < 2; ++axis) {
    std::vector<double> best;
    for (double s : d) {
      NoiseSpec ns;
      (axis == 0 ? ns.sigma_x : ns.sigma_z) = s;
      ns.samples = 200;
      ns.seed = 7;
      double m = 1.0;
      for (double t : tf) m = std::min(m, quasistatic_mc(p, t, ns, std::nullopt, Exec::Parallel).mean);
      best.push_back(m);
    }
    const auto fit = fit_polynomial(d, best, 2);
    const double lin = std::abs(fit[1] * 0.1), quad = std::abs(fit[2] * 0.01);
    c.add(axis == 0 ? "x noise: linear term below 5% of quadratic at delta = x/10"
                    : "z noise: linear term below 5% of quadratic at delta = x/10",
          lin < 0.05 * quad, fmt("|a1 d| = %.2e, |a2 d^2| = %.2e", lin, quad));
  }

  NoiseSpec ns;
  ns.sigma_x = 0.1;
  ns.sigma_z = 0.1;
  ns.samples = 200;
  ns.seed = 2024;
  const auto a = quasistatic_mc(p, 10.0, ns, std::nullopt, Exec::Serial);
  const auto b = quasistatic_mc(p, 10.0, ns, std::nullopt, Exec::Parallel);
  const auto again = quasistatic_mc(p, 10.0, ns, std::nullopt, Exec::Parallel);
  const bool same = a.infidelity == b.infidelity && b.infidelity == again.infidelity && a.mean == again.mean;
  c.add("200-sample MC bit-reproducible", same);
}

void basis(Criterion& c) {
  const auto np = linspace(-5.0, 5.0, 21);
  const auto b = prune(build_basis(np, 1.0, 10.0, kBasisGrid, Exec::Parallel));
  std::vector<double> g(b.tau.size()), ag(b.tau.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = b.tau[i];
    g[i] = -10.0 + 100.0 * t - 240.0 * t * t + 160.0 * t * t * t;
    ag[i] = std::abs(g[i]);
  }
  const double l1 = quad::trapezoid(b.tau, ag);
  const double e = expand(b, g).error;
  c.add("cubic target E < 1e-3 |g|_1", e < 1e-3 * l1, fmt("E/|g|_1 = %.2e", e / l1));

  std::vector<int> rank, size;
  for (int k = 1; k <= 10; ++k) {
    const auto grid = linspace(-k, k, static_cast<std::size_t>(4 * k + 1));
    rank.push_back(svd_rank(build_basis(grid, 1.0, 10.0, kBasisGrid, Exec::Parallel).gram));
    size.push_back(static_cast<int>(grid.size()));
  }
  const bool monotone = std::is_sorted(rank.begin(), rank.end());
  const bool flat = rank[9] == rank[6] && rank[9] < size[9];
  std::string curve;
  for (std::size_t i = 0; i < rank.size(); ++i) curve += " " + std::to_string(size[i]) + ":" + std::to_string(rank[i]);
  c.add("Gram rank vs size saturates", monotone && flat, "size:rank" + curve);

  const auto t1 = linspace(1.0, 5.0, 10), t2 = linspace(0.1, 1.0, 10);
  double emax = -1.0, at1 = 0.0, at2 = 0.0;
  for (double a : t1)
    for (double s : t2) {
      const auto m = build_model("lambda_system", {{"tau0", 1.0}, {"tau1", a}, {"tau2", s}});
      const auto p = synthesize_pulse(m, 2, 2, 1, -10, 10, 1024);
      const double err = expand(b, sample_on_grid(p, b.tau)).error;
      if (err > emax) {
        emax = err;
        at1 = a;
        at2 = s;
      }
    }
  c.add("Lambda-system error map maximum at the smallest tau2", std::abs(at2 - t2.front()) < 1e-12,
        fmt("max E = %.2e at tau1 = %.3f, tau2 = %.3f", emax, at1, at2));

  const auto sh = shuttling();
  double pos = INFINITY, neg = INFINITY;
  int skipped = 0;
  for (double al : {-5.0, -3.0, -1.0, 1.0, 3.0, 5.0})
    for (double be : {-5.0, -3.0, -1.0, 1.0, 3.0, 5.0}) {
      try {
        const auto p = synthesize_pulse(sh, al, be, 1, -10, 10, 1024);
        const double err = expand_split(b, sample_on_grid(p, b.tau)).error;
        (be > 0 ? pos : neg) = std::min(be > 0 ? pos : neg, err);
      } catch (const Error&) {
        ++skipped;
      }
    }
  c.add("shuttling reconstruction best for beta > 0", pos < neg,
        fmt("min E beta>0 %.2e, beta<0 %.2e, singular pairs %g", pos, neg, skipped));
}

void signal(Criterion& c) {
  const double dt = 1.0 / 128.0, fc = 2.0, fl = 0.25, fh = 8.0, al = 1.0, ah = 0.3;
  const std::size_t n = 128 * 16;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    x[i] = al * std::cos(2 * kPi * fl * t) + ah * std::cos(2 * kPi * fh * t);
  }
  const auto y = butterworth_filter(x, dt, {3, fc}, Padding::Periodic);
  auto amp = [&](double f) {
    double cs = 0.0, sn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ph = 2 * kPi * f * dt * static_cast<double>(i);
      cs += y[i] * std::cos(ph);
      sn += y[i] * std::sin(ph);
    }
    return 2.0 * std::hypot(cs, sn) / static_cast<double>(n);
  };
  const double expect = ah / al * std::sqrt((1 + std::pow(fl / fc, 6)) / (1 + std::pow(fh / fc, 6)));
  const double r2 = rel(amp(fh) / amp(fl), expect);
  c.add("two-tone ratio matches the closed form", r2 < 1e-6, fmt("rel %.2e", r2));

  const auto lin = lz_member(0.0);
  double lw = 0.0;
  for (double tf : {1.0, 7.0, 50.0}) {
    const auto s = slew_rate(lin, tf);
    lw = std::max({lw, rel(s.numeric, 20.0 / tf), rel(s.analytic, 20.0 / tf)});
  }
  c.add("linear pulse slew = 2 z0 / t_f", lw < 1e-9, fmt("max rel %.2e", lw));

  double sw = 0.0;
  for (double k : linspace(-4.0, 6.0, 21)) {
    const auto s = slew_rate(lz_member(k), 10.0);
    sw = std::max(sw, rel(s.numeric, s.analytic));
  }
  c.add("analytic vs numeric slew over n+ in [-4,6]", sw < 1e-3, fmt("max rel %.2e", sw));

  const auto grid = linspace(0.0, 6.0, 13);
  const auto map = filtered_fidelity_map(1.0, 10.0, grid, {1.0}, linspace(0.0, 10.0, 51), 100.0, 3, 1024,
                                         Exec::Parallel);
  const auto best = std::min_element(map.begin(), map.end(), [](const auto& a, const auto& b) {
    return a.min_infidelity < b.min_infidelity;
  });
  c.add("filtered optimum at n+ = 2 +- 0.5", std::abs(best->n_plus - 2.0) <= 0.5 + 1e-12,
        fmt("optimum n+ = %.2f, infidelity %.3e, t_f %.2f", best->n_plus, best->min_infidelity, best->t_opt));
}

void shuttling_checks(Criterion& c) {
  const auto sh = shuttling();
  const auto eps = linspace(-10.0, 10.0, 4001);
  // level 1 anticrosses both neighbours: minima of each gap, counted separately
  std::vector<double> g10(eps.size()), g21(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto s = spectrum(sh, eps[i]);
    g10[i] = s.gap(1, 0);
    g21[i] = s.gap(2, 1);
  }
  auto mins = local_minima(g10);
  for (auto i : local_minima(g21)) mins.push_back(i);
  std::string at;
  for (auto i : mins) at += fmt(" %.4f", eps[i]);
  c.add("three anticrossings in the first excited band", mins.size() == 3, "gap minima at" + at);

  const auto tf = linspace(0.2, 10.0, 50);
  double pos = INFINITY, neg = INFINITY;
  int skipped = 0;
  for (double al : {1.0, 2.0, 3.0, 4.0, 5.0})
    for (double be : {1.0, 2.0, 3.0, 4.0, 5.0})
      for (double sign : {1.0, -1.0}) {
        try {
          const auto p = synthesize_pulse(sh, sign * al, sign * be, 1, -10, 10, 1024);
          const double v = sweep_tf(p, tf, std::nullopt, Exec::Parallel).min_infidelity;
          (sign > 0 ? pos : neg) = std::min(sign > 0 ? pos : neg, v);
        } catch (const Error&) {
          ++skipped;
        }
      }
  c.add("alpha,beta > 0 beats alpha,beta < 0 by 10x", pos * 10.0 <= neg,
        fmt("best > 0: %.3e, best < 0: %.3e, singular pairs %g", pos, neg, skipped));

  const double t_c = 2.0;
  const auto av = build_model("shuttling_averaged", {{"t_c", t_c}, {"sigma", 0.1}});
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> e(-5.0, 5.0), a(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double et = e(rng), al = a(rng), be = a(rng);
    // d/d epsilon = (1/2) d/d z of the sector Hamiltonian
    const double g = std::pow(2.0, be) * hypermetric(av, t_c * et, al, be, 0);
    worst = std::max(worst, rel(g, lz_metric_closed_form(al, be, 1.0, et)));
  }
  c.add("averaged metric equals the two-level form", worst < 1e-8, fmt("max rel %.2e", worst));
}

void benchmarks(Criterion& c) {
  std::vector<int> counts;
  for (int k = 1; k <= 10; ++k) counts.push_back(k);
  const auto ac = bench_anticrossings(counts, 1, 5);
  const auto fit = runtime_fit(ac);
  c.add("run time vs anticrossings is linear", fit.r_squared > 0.95,
        fmt("R^2 = %.4f, slope %.3e s", fit.r_squared, fit.slope));

  double worst = 1.0;
  std::string detail;
  for (double n : {1.0, 2.0}) {
    std::vector<std::pair<double, double>> ab;
    for (double a : linspace(0.0, 2.0 * n, 5)) ab.emplace_back(a, 2.0 * n - a);
    const auto pts = bench_alpha_beta(ab, 1, 7);
    double lo = INFINITY, hi = 0.0;
    for (const auto& p : pts) {
      lo = std::min(lo, p.stats.median);
      hi = std::max(hi, p.stats.median);
    }
    worst = std::max(worst, hi / lo);
    detail += fmt(" n+=%g max/min %.2f;", n, hi / lo);
  }
  c.add("run time at fixed n+ within a 2x band", worst <= 2.0, "median" + detail);
}

}  // namespace

int main() {
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> all{
      {"qubit closed forms", qubit_closed_forms},
      {"LZ metric and delta", lz_metric_and_delta},
      {"n+ degeneracy", degeneracy},
      {"resonances", resonances},
      {"adiabatic bound", adiabatic_bound},
      {"FAQUAD minimality", faquad_minimal},
      {"dephasing sweep", dephasing},
      {"robustness", robustness},
      {"basis", basis},
      {"signal conditioning", signal},
      {"shuttling", shuttling_checks},
      {"benchmarks", benchmarks},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      all[i].second(c);
    } catch (const std::exception& e) {
      c.add("no exception", false, e.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s (%.1f s)\n", c.passed() ? "PASS" : "FAIL", i + 1, all[i].first.c_str(), sec);
    for (const auto& k : c.checks())
      std::printf("       [%s] %s: %s\n", k.ok ? "ok" : "no", k.what.c_str(), k.detail.c_str());
    if (!c.passed()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
