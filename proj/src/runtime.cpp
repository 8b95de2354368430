#include "hgeo/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <numbers>

#include "hgeo/error.hpp"
#include "hgeo/models.hpp"
#include "hgeo/synthesis.hpp"

namespace hgeo {

namespace {

// linear interpolation between order statistics
double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TimingStats time_call(const std::function<void()>& f, int warmup, int repetitions) {
  if (warmup < 1) throw_config("InvalidValue", "benchmark warmup must be at least 1");
  if (repetitions < 5) throw_config("InvalidValue", "benchmark repetitions must be at least 5");
  for (int i = 0; i < warmup; ++i) f();
  TimingStats s;
  for (int i = 0; i < repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    s.samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  s.median = quantile(s.samples, 0.5);
  s.q1 = quantile(s.samples, 0.25);
  s.q3 = quantile(s.samples, 0.75);
  return s;
}

std::vector<RuntimePoint> bench_alpha_beta(const std::vector<std::pair<double, double>>& ab, int warmup,
                                           int repetitions, int n_samples) {
  const ParametricModel model = build_model("landau_zener", {{"x", 1.0}});
  std::vector<RuntimePoint> out;
  for (const auto& [a, b] : ab) {
    RuntimePoint p{"alpha_beta", 0.5 * (a + b), a, b, 0, {}};
    p.stats = time_call([&] { synthesize_pulse(model, a, b, 0, -10.0, 10.0, n_samples); }, warmup, repetitions);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<RuntimePoint> bench_anticrossings(const std::vector<int>& counts, int warmup, int repetitions, double x,
                                              int n_samples) {
  const ParametricModel model = build_model("periodic_lz", {{"x", x}});
  std::vector<RuntimePoint> out;
  for (int k : counts) {
    if (k < 1) throw_config("InvalidValue", "anticrossing count must be positive");
    RuntimePoint p{"anticrossings", static_cast<double>(k), 2.0, 2.0, 0, {}};
    const double hi = std::numbers::pi * k;
    p.stats = time_call([&] { synthesize_pulse(model, 2.0, 2.0, 0, 0.0, hi, n_samples); }, warmup, repetitions);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<RuntimePoint> bench_dimension(const std::vector<int>& n, const std::vector<int>& k_max, int warmup,
                                          int repetitions, int n_samples) {
  std::vector<RuntimePoint> out;
  for (int dim : n) {
    for (int k : k_max) {
      if (k < 2 || k > dim) continue;
      ParametricModel model =
          build_model("all_to_all", {{"N", static_cast<double>(dim)}, {"x", 1.0}, {"Delta", 1.0}});
      model.metric_levels = k;
      RuntimePoint p{"dimension", static_cast<double>(dim), 2.0, 2.0, k, {}};
      p.stats = time_call([&] { synthesize_pulse(model, 2.0, 2.0, 0, -10.0, 10.0, n_samples); }, warmup,
                          repetitions);
      out.push_back(std::move(p));
    }
  }
  return out;
}

LinearFit runtime_fit(const std::vector<RuntimePoint>& points) {
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(p.x);
    y.push_back(p.stats.median);
  }
  return fit_line(x, y);
}

}  // namespace hgeo
