#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hgeo/numerics.hpp"

namespace hgeo {

struct TimingStats {
  double median = 0.0;  // seconds
  double q1 = 0.0;
  double q3 = 0.0;
  std::vector<double> samples;

  double iqr() const { return q3 - q1; }
};

/// Runs f warmup times untimed, then `repetitions` timed runs.
/// Requires warmup >= 1 and repetitions >= 5 (ConfigError/InvalidValue).
TimingStats time_call(const std::function<void()>& f, int warmup, int repetitions);

struct RuntimePoint {
  std::string scan;  // "alpha_beta", "anticrossings", "dimension"
  double x = 0.0;    // scan coordinate: n_plus, anticrossing count or N
  double alpha = 0.0;
  double beta = 0.0;
  int k_max = 0;     // levels in the metric sum (dimension scan)
  TimingStats stats;
};

/// Landau-Zener synthesis (z0 = 10, x = 1) for each (alpha, beta).
std::vector<RuntimePoint> bench_alpha_beta(const std::vector<std::pair<double, double>>& ab, int warmup,
                                           int repetitions, int n_samples = 1024);

/// Periodic LZ cos(z) sz + x sx with z in [0, k pi], which crosses k anticrossings.
std::vector<RuntimePoint> bench_anticrossings(const std::vector<int>& counts, int warmup, int repetitions,
                                              double x = 0.2, int n_samples = 1024);

/// All-to-all model of dimension N, metric summed over the lowest k_max levels.
std::vector<RuntimePoint> bench_dimension(const std::vector<int>& n, const std::vector<int>& k_max, int warmup,
                                          int repetitions, int n_samples = 1024);

/// Least-squares line of median run time against the scan coordinate.
LinearFit runtime_fit(const std::vector<RuntimePoint>& points);

}  // namespace hgeo
