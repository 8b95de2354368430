#include "hgeo/signal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "hgeo/error.hpp"
#include "hgeo/hypergeometry.hpp"

namespace hgeo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// planner calls are not thread-safe in FFTW
std::mutex& planner_lock() {
  static std::mutex m;
  return m;
}

// forward real transform, n/2+1 bins
std::vector<std::complex<double>> rfft(std::vector<double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_lock());
    plan = fftw_plan_dft_r2c_1d(n, x.data(), reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_lock());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> irfft(std::vector<std::complex<double>> spec, std::size_t n) {
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_lock());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_lock());
    fftw_destroy_plan(plan);
  }
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

void check_spec(const FilterSpec& spec) {
  if (spec.order < 1) throw_config("InvalidFilter", "filter order must be at least 1");
  if (!(spec.f_c > 0.0) || !std::isfinite(spec.f_c)) throw_config("InvalidFilter", "cutoff frequency must be positive");
}

// Uniform samples of the pulse, at least min_count of them.
std::vector<double> time_samples(const PulseProfile& pulse, std::size_t min_count = 1024) {
  if (pulse.lambda.size() >= min_count) return pulse.lambda;
  std::vector<double> out;
  for (double t : linspace(0.0, 1.0, min_count)) out.push_back(pulse.value(t));
  return out;
}

// Golden-section search for the maximum of f on [a, b]; returns (argmax, max).
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && b - a > tol; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

std::complex<double> butterworth_response(double f, const FilterSpec& spec) {
  check_spec(spec);
  const std::complex<double> s(0.0, f / spec.f_c);
  std::complex<double> h(1.0, 0.0);
  const int n = spec.order;
  for (int k = 1; k <= n; ++k) {
    const std::complex<double> pole = std::polar(1.0, std::numbers::pi * (2.0 * k + n - 1.0) / (2.0 * n));
    h *= -pole / (s - pole);
  }
  return h;
}

std::vector<double> butterworth_filter(std::span<const double> samples, double dt, const FilterSpec& spec,
                                       Padding padding) {
  check_spec(spec);
  if (samples.size() < 2) throw_config("InvalidSamples", "filtering needs at least two samples");
  if (!(dt > 0.0)) throw_config("InvalidTime", "sample spacing must be positive");
  if (spec.f_c > 0.25 * 0.5 / dt)
    throw_numerics("GridTooCoarse", "cutoff frequency exceeds a quarter of the Nyquist frequency");

  std::size_t pre = 0;
  std::size_t post = 0;
  if (padding == Padding::Boundary) {
    // slowest pole decays like exp(-2 pi f_c sin(pi / 2n) t); pad until e^-40
    const double rate = kTwoPi * spec.f_c * std::sin(std::numbers::pi / (2.0 * spec.order));
    pre = static_cast<std::size_t>(std::ceil(40.0 / (rate * dt)));
    post = pre / 4 + 1;
  }
  const std::size_t n = samples.size();
  std::vector<double> x;
  x.reserve(pre + n + post);
  x.insert(x.end(), pre, samples.front());
  x.insert(x.end(), samples.begin(), samples.end());
  x.insert(x.end(), post, samples.back());

  const std::size_t total = x.size();
  auto spec_x = rfft(std::move(x));
  const double df = 1.0 / (static_cast<double>(total) * dt);
  for (std::size_t k = 0; k < spec_x.size(); ++k) {
    std::complex<double> h = butterworth_response(df * static_cast<double>(k), spec);
    // the Nyquist bin of an even-length record must stay real
    if (total % 2 == 0 && k + 1 == spec_x.size()) h = std::abs(h);
    spec_x[k] *= h;
  }
  auto y = irfft(std::move(spec_x), total);
  return {y.begin() + static_cast<std::ptrdiff_t>(pre), y.begin() + static_cast<std::ptrdiff_t>(pre + n)};
}

double settle_time(const FilterSpec& spec) {
  check_spec(spec);
  return std::log(1e4) / (kTwoPi * spec.f_c * std::sin(std::numbers::pi / (2.0 * spec.order)));
}

FilteredPulse butterworth_apply(const PulseProfile& pulse, double t_f, const FilterSpec& spec) {
  if (!(t_f > 0.0)) throw_config("InvalidTime", "filtering needs t_f > 0");
  check_spec(spec);
  // resample when the pulse grid is too coarse for the cutoff (dt <= 1 / (16 f_c))
  auto samples = time_samples(pulse, static_cast<std::size_t>(std::ceil(16.0 * spec.f_c * t_f)) + 1);
  const double dt = t_f / static_cast<double>(samples.size() - 1);
  const auto tail = static_cast<std::size_t>(std::ceil(settle_time(spec) / dt));
  samples.insert(samples.end(), tail, samples.back());
  FilteredPulse out;
  out.duration = dt * static_cast<double>(samples.size() - 1);
  auto filtered = butterworth_filter(samples, dt, spec, Padding::Boundary);
  out.pulse = sampled_pulse(pulse.model, std::move(filtered), pulse.state_index, pulse.label + " (filtered)");
  out.pulse.alpha = pulse.alpha;
  out.pulse.beta = pulse.beta;
  out.pulse.n_plus = pulse.n_plus;
  out.pulse.n_minus = pulse.n_minus;
  out.pulse.delta = pulse.delta;
  return out;
}

double lz_slew_closed_form(double alpha, double beta, double x, double z0, double t_f) {
  const double n_plus = 0.5 * (alpha + beta);
  const double delta = lz_delta_closed_form(alpha, beta, x, z0);
  // (x^2+z^2)^{n/2} is largest at |z| = z0 for n > 0 and at z = 0 otherwise
  const double peak = n_plus > 0.0 ? std::pow(x * x + z0 * z0, 0.5 * n_plus) : std::pow(x * x, 0.5 * n_plus);
  return std::pow(2.0, 0.5 * alpha) * delta * std::pow(x, -0.5 * beta) * peak / t_f;
}

SlewRate slew_rate(const PulseProfile& pulse, double t_f, int n_eval) {
  if (!(t_f > 0.0)) throw_config("InvalidTime", "slew rate needs t_f > 0");
  n_eval = std::max(n_eval, 3);
  SlewRate r;
  const double h = 1.0 / static_cast<double>(n_eval - 1);
  // Second-order difference of lambda(tau) with step s, one-sided at the ends.
  auto diff = [&](double t, double s) {
    if (t - s < 0.0) return (-3.0 * pulse.value(t) + 4.0 * pulse.value(t + s) - pulse.value(t + 2 * s)) / (2 * s);
    if (t + s > 1.0) return (3.0 * pulse.value(t) - 4.0 * pulse.value(t - s) + pulse.value(t - 2 * s)) / (2 * s);
    return (pulse.value(t + s) - pulse.value(t - s)) / (2 * s);
  };
  // Steep pulses vary on scales far below the grid, so the step is halved
  // with Richardson extrapolation until the estimate settles.
  auto refined = [&](double t) {
    double s = h;
    double prev = diff(t, s);
    double last = prev;
    double out = prev;
    double change = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 36; ++k) {
      s *= 0.5;
      const double cur = diff(t, s);
      const double rich = (4.0 * cur - prev) / 3.0;
      const double c = std::abs(rich - last);
      if (k > 0 && c < change) {
        change = c;
        out = rich;
        if (c <= 1e-10 * std::abs(rich)) break;
      }
      last = rich;
      prev = cur;
    }
    return out;
  };
  std::size_t arg = 0;
  double coarse = -1.0;
  for (int i = 0; i < n_eval; ++i) {
    const double d = std::abs(diff(i * h, h));
    if (d > coarse) {
      coarse = d;
      arg = static_cast<std::size_t>(i);
    }
  }
  // maximise the refined derivative on the cells next to the coarse maximum
  const double a = std::max(0.0, (static_cast<double>(arg) - 1.0) * h);
  const double b = std::min(1.0, (static_cast<double>(arg) + 1.0) * h);
  auto speed = [&](double t) { return std::abs(refined(t)); };
  const double peak = std::max({speed(a), speed(b), speed(arg * h), golden_max(speed, a, b, 1e-12).second});
  r.numeric = peak / t_f;

  if (pulse.kind != PulseKind::Geodesic) {
    r.analytic = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const double lo = std::min(pulse.lambda0, pulse.lambda1);
  const double hi = std::max(pulse.lambda0, pulse.lambda1);
  if (pulse.model.name == "landau_zener") {
    const double x = pulse.model.constant("x");
    const double z0 = 0.5 * (hi - lo);
    if (std::abs(lo + hi) < 1e-12 * z0) {
      r.analytic = lz_slew_closed_form(pulse.alpha, pulse.beta, x, z0, t_f);
      r.lambda_at_max = pulse.n_plus > 0.0 ? hi : 0.0;
      return r;
    }
  }
  auto root_g = [&](double lam) {
    return std::sqrt(hypermetric(pulse.model, lam, pulse.alpha, pulse.beta, pulse.state_index));
  };
  constexpr int scan = 4097;
  int best = 0;
  double best_g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < scan; ++i) {
    const double g = root_g(lo + (hi - lo) * i / (scan - 1));
    if (g < best_g) {
      best_g = g;
      best = i;
    }
  }
  const double a_lam = lo + (hi - lo) * std::max(best - 1, 0) / (scan - 1);
  const double b_lam = lo + (hi - lo) * std::min(best + 1, scan - 1) / (scan - 1);
  const auto [lam, neg] = golden_max([&](double l) { return -root_g(l); }, a_lam, b_lam,
                                     1e-13 * std::max(1.0, std::abs(a_lam)));
  const bool refined_better = -neg < best_g;
  const double g = refined_better ? -neg : best_g;
  r.lambda_at_max = refined_better ? lam : lo + (hi - lo) * best / (scan - 1);
  r.analytic = pulse.delta / (t_f * g);
  return r;
}

namespace {

BandwidthResult stft_of_derivative(const std::vector<double>& deriv, double dt, double window, double threshold_db,
                                   double overlap) {
  if (!(threshold_db < 0.0)) throw_config("InvalidThreshold", "intensity threshold must be negative (dB)");
  if (!(overlap >= 0.0 && overlap < 1.0)) throw_config("InvalidOverlap", "window overlap must lie in [0, 1)");
  if (!(dt > 0.0)) throw_config("InvalidTime", "sample spacing must be positive");
  const std::size_t n = deriv.size();
  const auto len = static_cast<std::size_t>(std::llround(window / dt)) + 1;
  if (len < 8 || len > n) throw_numerics("GridTooCoarse", "STFT window must span at least 8 samples of the record");

  std::size_t nfft = 1;
  while (nfft < 4 * len) nfft <<= 1;
  const std::size_t hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len * (1.0 - overlap))));
  std::vector<double> ham(len);
  for (std::size_t i = 0; i < len; ++i) ham[i] = 0.54 - 0.46 * std::cos(kTwoPi * i / (len - 1));

  BandwidthResult res;
  const double df = 1.0 / (static_cast<double>(nfft) * dt);
  for (std::size_t k = 1; k <= nfft / 2; ++k) res.stft.f.push_back(df * k);
  std::vector<std::vector<double>> mag;
  double peak = 0.0;
  // Windows are centred on 0, hop, 2 hop, ... up to the end of the record; the
  // derivative is zero outside it (the control rests at its boundary values).
  const auto half = static_cast<std::ptrdiff_t>(len / 2);
  const auto last = static_cast<std::ptrdiff_t>(n - 1);
  for (std::ptrdiff_t centre = 0; centre <= last + static_cast<std::ptrdiff_t>(hop) - 1;
       centre += static_cast<std::ptrdiff_t>(hop)) {
    const std::ptrdiff_t start = centre - half;
    std::vector<double> buf(nfft, 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const std::ptrdiff_t j = start + static_cast<std::ptrdiff_t>(i);
      if (j >= 0 && j <= last) buf[i] = deriv[static_cast<std::size_t>(j)] * ham[i];
    }
    const auto spec = rfft(std::move(buf));
    std::vector<double> row(res.stft.f.size());
    for (std::size_t k = 1; k < spec.size(); ++k) {
      row[k - 1] = std::abs(spec[k]) / (kTwoPi * res.stft.f[k - 1]);
      peak = std::max(peak, row[k - 1]);
    }
    res.stft.t.push_back(dt * static_cast<double>(std::min(centre, last)));
    mag.push_back(std::move(row));
  }
  const double floor_db = -400.0;
  res.stft.db.resize(mag.size());
  for (std::size_t w = 0; w < mag.size(); ++w) {
    res.stft.db[w].resize(mag[w].size());
    for (std::size_t k = 0; k < mag[w].size(); ++k) {
      const double db = peak > 0.0 && mag[w][k] > 0.0 ? 20.0 * std::log10(mag[w][k] / peak) : floor_db;
      res.stft.db[w][k] = std::max(db, floor_db);
      if (peak > 0.0 && db >= threshold_db) res.f_max = std::max(res.f_max, res.stft.f[k]);
    }
  }
  return res;
}

}  // namespace

BandwidthResult bandwidth(std::span<const double> samples, double dt, double window, double threshold_db,
                          double overlap) {
  if (!(dt > 0.0)) throw_config("InvalidTime", "sample spacing must be positive");
  const std::size_t n = samples.size();
  if (n < 3) throw_config("InvalidSamples", "bandwidth needs at least three samples");
  std::vector<double> deriv(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      deriv[i] = (samples[1] - samples[0]) / dt;
    else if (i + 1 == n)
      deriv[i] = (samples[n - 1] - samples[n - 2]) / dt;
    else
      deriv[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * dt);
  }
  return stft_of_derivative(deriv, dt, window, threshold_db, overlap);
}

BandwidthResult bandwidth(const PulseProfile& pulse, double t_f, double window, double threshold_db) {
  if (!(t_f > 0.0)) throw_config("InvalidTime", "bandwidth needs t_f > 0");
  // the pulse speed is known exactly, no need to difference the samples
  const std::size_t n = std::max<std::size_t>(pulse.tau.size(), 1024);
  const auto tau = linspace(0.0, 1.0, n);
  std::vector<double> deriv(n);
  for (std::size_t i = 0; i < n; ++i) deriv[i] = pulse.slope(tau[i]) / t_f;
  const double dt = t_f / static_cast<double>(n - 1);
  return stft_of_derivative(deriv, dt, window > 0.0 ? window : t_f / 8.0, threshold_db, 0.75);
}

SweepResult filtered_sweep(const PulseProfile& pulse, const FilterSpec& spec, const std::vector<double>& t_f,
                           std::optional<double> t2) {
  if (t_f.empty()) throw_config("EmptyGrid", "t_f grid is empty");
  for (std::size_t i = 1; i < t_f.size(); ++i)
    if (!(t_f[i] > t_f[i - 1])) throw_config("UnsortedGrid", "t_f grid must be strictly ascending");
  SweepResult s;
  s.t_f = t_f;
  s.infidelity.assign(t_f.size(), 0.0);
  EvolutionOptions opt;
  opt.target_lambda = pulse.lambda1;
  const bool open = t2 && *t2 > 0.0;
  for (std::size_t i = 0; i < t_f.size(); ++i) {
    // the sudden limit has no time axis to filter on
    const FilteredPulse fp = t_f[i] > 0.0 ? butterworth_apply(pulse, t_f[i], spec) : FilteredPulse{pulse, 0.0};
    const double f = open ? evolve_lindblad(fp.pulse, fp.duration, *t2, nullptr, opt).fidelity
                          : evolve_unitary(fp.pulse, fp.duration, nullptr, opt).fidelity;
    s.infidelity[i] = 1.0 - f;
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(s.infidelity.begin(), s.infidelity.end()) - s.infidelity.begin());
  s.t_opt = t_f[best];
  s.min_infidelity = s.infidelity[best];
  return s;
}

std::vector<FilteredMapEntry> filtered_fidelity_map(double x, double z0, const std::vector<double>& n_plus,
                                                    const std::vector<double>& f_c, const std::vector<double>& t_f,
                                                    std::optional<double> t2, int order, int n_samples, Exec exec) {
  if (n_plus.empty() || f_c.empty()) throw_config("EmptyGrid", "n_plus and f_c grids must be non-empty");
  const auto pulses = lz_pulse_family(n_plus, x, z0, n_samples, exec);
  std::vector<FilteredMapEntry> out(n_plus.size() * f_c.size());
  for_each_index(exec, out.size(), [&](std::size_t idx) {
    const std::size_t i = idx / f_c.size();
    const std::size_t j = idx % f_c.size();
    const SweepResult s = filtered_sweep(pulses[i], FilterSpec{order, f_c[j]}, t_f, t2);
    out[idx] = {n_plus[i], f_c[j], s.min_infidelity, s.t_opt};
  });
  return out;
}

}  // namespace hgeo
