#include "hgeo/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hgeo/error.hpp"
#include "hgeo/hypergeometry.hpp"

namespace hgeo {

const char* to_string(PulseKind k) {
  switch (k) {
    case PulseKind::Geodesic:
      return "geodesic";
    case PulseKind::PiPulse:
      return "pi_pulse";
    case PulseKind::Sampled:
      return "sampled";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Cubic Hermite on [x0, x1].
double hermite(double x0, double x1, double y0, double y1, double m0, double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * m1;
}

double hermite_slope(double x0, double x1, double y0, double y1, double m0, double m1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (6 * t2 - 6 * t) * -y1) / h + (3 * t2 - 4 * t + 1) * m0 + (3 * t2 - 2 * t) * m1;
}

// Fritsch-Carlson limiter; non-finite slopes are replaced first.
void limit_slopes(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& m) {
  const std::size_t n = x.size();
  if (n < 2) return;
  std::vector<double> sec(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) sec[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isfinite(m[k])) continue;
    m[k] = k == 0 ? sec[0] : (k + 1 == n ? sec[n - 2] : 0.5 * (sec[k - 1] + sec[k]));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sec[k] == 0.0) {
      m[k] = 0.0;
      m[k + 1] = 0.0;
      continue;
    }
    if (m[k] * sec[k] < 0.0) m[k] = 0.0;
    if (m[k + 1] * sec[k] < 0.0) m[k + 1] = 0.0;
    const double a = m[k] / sec[k];
    const double b = m[k + 1] / sec[k];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      m[k] = t * a * sec[k];
      m[k + 1] = t * b * sec[k];
    }
  }
}

struct Gk15 {
  double value, error;
};

Gk15 gk15(const std::function<double(double)>& f, double a, double b) {
  static constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                    0.207784955007898467600689403773245, 0.0};
  static constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                   0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * wgk[7];
  double g = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double s = f(c - h * xgk[j]) + f(c + h * xgk[j]);
    k += wgk[j] * s;
    if (j % 2 == 1) g += wg[j / 2] * s;
  }
  return {k * h, std::abs((k - g) * h)};
}

enum class PanelKind { Numeric, TailLeft, TailRight };

// Cumulative arclength s(lambda) on an adaptive grid over [lo, hi].
// Tail panels border a singular point where sqrt(G) ~ u^p; they are
// integrated and inverted analytically.
struct Arclength {
  std::function<double(double)> speed;
  std::vector<double> x;  // nodes, ascending
  std::vector<double> s;  // cumulative arclength at nodes
  std::vector<double> w;  // speed at nodes (NaN at singular nodes)
  std::vector<PanelKind> kind;
  std::vector<double> power;  // tail exponent p per panel
  double total() const { return s.back(); }
};

struct Piece {
  double a, b;
  bool sing_a, sing_b;
};

double tail_exponent(const std::function<double(double)>& speed, double at, double u, double dir) {
  const double w1 = speed(at + dir * u);
  const double w2 = speed(at + dir * u / 16.0);
  if (!(w1 > 0.0 && w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
    throw_numerics("MetricSingular", "metric vanishes or diverges next to a singular point");
  return std::log(w1 / w2) / std::log(16.0);
}

Arclength build_arclength(std::function<double(double)> speed, const std::vector<Piece>& pieces, bool fine) {
  struct Raw {
    double a, b;
    PanelKind kind;
    double p;
    double value, error;
    double wa, wb;  // speed at the ends (NaN at singular ends)
  };
  std::vector<Raw> raw;
  for (const auto& pc : pieces) {
    const double width = pc.b - pc.a;
    const double uc = 1e-6 * width;
    double a = pc.a;
    double b = pc.b;
    if (pc.sing_a) {
      const double p = tail_exponent(speed, pc.a, uc, +1.0);
      if (!(p > -1.0 + 1e-9)) throw_numerics("MetricSingular", "non-integrable metric divergence at a singular point");
      const double w = speed(pc.a + uc);
      raw.push_back({pc.a, pc.a + uc, PanelKind::TailLeft, p, w * uc / (p + 1.0), 0.0, kNaN, w});
      a = pc.a + uc;
    }
    Raw right{};
    if (pc.sing_b) {
      const double p = tail_exponent(speed, pc.b, uc, -1.0);
      if (!(p > -1.0 + 1e-9)) throw_numerics("MetricSingular", "non-integrable metric divergence at a singular point");
      const double w = speed(pc.b - uc);
      right = {pc.b - uc, pc.b, PanelKind::TailRight, p, w * uc / (p + 1.0), 0.0, w, kNaN};
      b = pc.b - uc;
    }
    constexpr int n0 = 64;
    double wl = speed(a);
    for (int i = 0; i < n0; ++i) {
      const double l = a + (b - a) * i / n0;
      const double r = i + 1 == n0 ? b : a + (b - a) * (i + 1) / n0;
      const double wr = speed(r);
      const auto q = gk15(speed, l, r);
      raw.push_back({l, r, PanelKind::Numeric, 0.0, q.value, q.error, wl, wr});
      wl = wr;
    }
    if (pc.sing_b) raw.push_back(right);
  }
  double est = 0.0;
  for (const auto& r : raw) est += r.value;
  if (!std::isfinite(est)) throw_numerics("MetricSingular", "metric is not finite along the path");
  if (!(est > 0.0)) throw_numerics("InversionFailure", "path has zero hypergeometric length");

  const double err_tol = 1e-13 * est;
  const double max_step = fine ? est / 512.0 : std::numeric_limits<double>::infinity();
  std::vector<Raw> panels;
  panels.reserve(raw.size() * 4);
  // depth-first refinement, left to right, so the output stays sorted
  std::vector<std::pair<Raw, int>> stack;
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) stack.emplace_back(*it, 0);
  while (!stack.empty()) {
    auto [r, depth] = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (r.a + r.b);
    const bool splittable = r.kind == PanelKind::Numeric && depth < 60 && mid > r.a && mid < r.b;
    bool split = splittable && (r.error > err_tol || r.value > max_step);
    double wm = kNaN;
    if (splittable && !split && fine) {
      // the cubic Hermite of s(lambda) must reproduce the speed; its leading
      // derivative error vanishes at the midpoint, so probe a quarter point
      const double h = r.b - r.a;
      const double xq = r.a + 0.25 * h;
      const double wq = speed(xq);
      const double predicted = hermite_slope(r.a, r.b, 0.0, r.value, r.wa, r.wb, xq);
      split = std::abs(predicted - wq) > 1e-8 * std::max(wq, 1e-3 * r.value / h);
    }
    if (split) {
      if (std::isnan(wm)) wm = speed(mid);
      const auto ql = gk15(speed, r.a, mid);
      const auto qr = gk15(speed, mid, r.b);
      stack.emplace_back(Raw{mid, r.b, PanelKind::Numeric, 0.0, qr.value, qr.error, wm, r.wb}, depth + 1);
      stack.emplace_back(Raw{r.a, mid, PanelKind::Numeric, 0.0, ql.value, ql.error, r.wa, wm}, depth + 1);
      continue;
    }
    if (!std::isfinite(r.value)) throw_numerics("MetricSingular", "metric is not finite along the path");
    panels.push_back(r);
    if (panels.size() > 2000000)
      throw_numerics("NonConvergent", "arclength refinement exceeded its panel budget (unresolved metric divergence?)");
  }

  Arclength arc;
  arc.speed = std::move(speed);
  arc.x.push_back(panels.front().a);
  arc.s.push_back(0.0);
  arc.w.reserve(panels.size() + 1);
  for (const auto& p : panels) {
    arc.x.push_back(p.b);
    arc.s.push_back(arc.s.back() + p.value);
    arc.kind.push_back(p.kind);
    arc.power.push_back(p.p);
  }
  arc.w.push_back(panels.front().wa);
  for (const auto& p : panels) arc.w.push_back(p.wb);
  return arc;
}

// lambda with s(lambda) = target.
double invert(const Arclength& arc, double target) {
  const auto& s = arc.s;
  if (target <= 0.0) return arc.x.front();
  if (target >= s.back()) return arc.x.back();
  std::size_t k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), target) - s.begin());
  k = std::min(std::max<std::size_t>(k, 1), s.size() - 1) - 1;
  const double a = arc.x[k];
  const double b = arc.x[k + 1];
  const double mass = s[k + 1] - s[k];
  if (!(mass > 0.0)) throw_numerics("InversionFailure", "arclength is not strictly increasing");
  const double frac = (target - s[k]) / mass;
  if (arc.kind[k] == PanelKind::TailLeft)
    return a + (b - a) * std::pow(frac, 1.0 / (arc.power[k] + 1.0));
  if (arc.kind[k] == PanelKind::TailRight)
    return b - (b - a) * std::pow(1.0 - frac, 1.0 / (arc.power[k] + 1.0));

  // Hermite guess for the inverse, then safeguarded Newton on the exact integral.
  double guess = a + frac * (b - a);
  if (std::isfinite(arc.w[k]) && std::isfinite(arc.w[k + 1]) && arc.w[k] > 0.0 && arc.w[k + 1] > 0.0)
    guess = hermite(s[k], s[k + 1], a, b, 1.0 / arc.w[k], 1.0 / arc.w[k + 1], target);
  double lo = a;
  double hi = b;
  double x = std::clamp(guess, lo, hi);
  const double xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(a), std::abs(b), b - a});
  for (int it = 0; it < 100; ++it) {
    const double f = (x > a ? gk15(arc.speed, a, x).value : 0.0) + s[k] - target;
    if (f == 0.0) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double w = arc.speed(x);
    double next = w > 0.0 && std::isfinite(w) ? x - f / w : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= xtol || hi - lo <= xtol) return next;
    x = next;
  }
  throw_numerics("InversionFailure", "arclength inversion did not converge");
}

// Interior zeros of |<n|dH|m>|. With beta < 0 the metric diverges there.
std::vector<double> element_zeros(const ParametricModel& model, int m, double lo, double hi) {
  constexpr int scan = 4097;
  std::vector<double> x = linspace(lo, hi, scan);
  std::vector<Spectrum> specs;
  specs.reserve(scan);
  for (int i = 0; i < scan; ++i) specs.push_back(spectrum(model, x[i], i > 0 ? &specs.back() : nullptr));
  auto element = [&](double lam, int n) {
    const Spectrum s = spectrum(model, lam);
    return std::abs(matrix_element(model, s, Params{lam}, 0, n, m));
  };
  std::vector<double> out;
  for (int n = 0; n < model.dim; ++n) {
    if (n == m) continue;
    std::vector<double> v(scan);
    for (int i = 0; i < scan; ++i) v[i] = std::abs(matrix_element(model, specs[i], Params{x[i]}, 0, n, m));
    const double top = *std::max_element(v.begin(), v.end());
    if (!(top > kSelectionRuleTol)) continue;  // forbidden transition, never enters the metric
    for (int i = 1; i + 1 < scan; ++i) {
      if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1]) || v[i] > 1e-3 * top) continue;
      double a = x[i - 1];
      double b = x[i + 1];
      const double r = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - r * (b - a);
      double d = a + r * (b - a);
      double fc = element(c, n);
      double fd = element(d, n);
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - r * (b - a);
          fc = element(c, n);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + r * (b - a);
          fd = element(d, n);
        }
      }
      if (std::min(fc, fd) < 1e-9 * top) out.push_back(0.5 * (a + b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Piece> split_pieces(const ParametricModel& model, double lo, double hi, std::vector<double> extra = {}) {
  const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
  std::vector<double> cuts;
  bool sing_lo = false;
  bool sing_hi = false;
  auto points = model.singular_points(lo, hi);
  points.insert(points.end(), extra.begin(), extra.end());
  for (double p : points) {
    if (std::abs(p - lo) <= 1e-12 * scale)
      sing_lo = true;
    else if (std::abs(p - hi) <= 1e-12 * scale)
      sing_hi = true;
    else if (p > lo && p < hi)
      cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double a, double b) { return b - a <= 1e-12 * scale; }),
             cuts.end());
  std::vector<Piece> pieces;
  double a = lo;
  bool sa = sing_lo;
  for (double c : cuts) {
    pieces.push_back({a, c, sa, true});
    a = c;
    sa = true;
  }
  pieces.push_back({a, hi, sa, sing_hi});
  return pieces;
}

std::vector<Piece> metric_pieces(const ParametricModel& model, double beta, int m, double lo, double hi) {
  if (beta < 0.0 && model.control_count == 1) return split_pieces(model, lo, hi, element_zeros(model, m, lo, hi));
  return split_pieces(model, lo, hi);
}

std::function<double(double)> speed_function(const ParametricModel& model, double alpha, double beta, int m) {
  return [&model, alpha, beta, m](double lam) {
    const Params p{lam};
    const double g = hypermetric(model, spectrum(model, p), p, alpha, beta, m, 0);
    if (!(g >= 0.0) || !std::isfinite(g)) throw_numerics("MetricSingular", "metric not finite at lambda=" + std::to_string(lam));
    return std::sqrt(g);
  };
}

void check_inputs(const ParametricModel& model, int m, double lambda0, double lambda1) {
  if (model.control_count != 1) throw_model("UnsupportedDimension", "pulse synthesis needs a single control");
  if (m < 0 || m >= model.dim) throw_model("IndexOutOfRange", "state index outside the model dimension");
  if (!std::isfinite(lambda0) || !std::isfinite(lambda1) || lambda0 == lambda1)
    throw_config("InvalidBoundaries", "boundaries must be finite and distinct");
}

std::size_t knot_panel(const std::vector<double>& kt, double t) {
  std::size_t k = static_cast<std::size_t>(std::upper_bound(kt.begin(), kt.end(), t) - kt.begin());
  return std::min(std::max<std::size_t>(k, 1), kt.size() - 1) - 1;
}

// lambda in panel k with tau_herm(lambda) = t
double invert_panel(const PulseProfile& p, std::size_t k, double t) {
  const double l0 = p.knot_lambda[k];
  const double l1 = p.knot_lambda[k + 1];
  const double t0 = p.knot_tau[k];
  const double t1 = p.knot_tau[k + 1];
  const double d0 = p.knot_inverse_slope[k];
  const double d1 = p.knot_inverse_slope[k + 1];
  double lo = std::min(l0, l1);
  double hi = std::max(l0, l1);
  const bool rising = l1 > l0;
  double x = l0 + (l1 - l0) * (t - t0) / (t1 - t0);
  const double xtol = 2.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(lo), std::abs(hi), 1e-300});
  for (int it = 0; it < 200; ++it) {
    const double f = hermite(l0, l1, t0, t1, d0, d1, x) - t;
    if (f == 0.0) return x;
    if ((f > 0.0) == rising)
      hi = x;
    else
      lo = x;
    const double df = hermite_slope(l0, l1, t0, t1, d0, d1, x);
    double next = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= xtol || hi - lo <= xtol) return next;
    x = next;
  }
  return x;
}

}  // namespace

double PulseProfile::value(double t) const {
  if (kind == PulseKind::PiPulse) {
    if (t <= 0.0) return lambda0;
    if (t >= 1.0) return lambda1;
    return hold;
  }
  if (knot_tau.empty()) return lambda0;
  if (t <= knot_tau.front()) return knot_lambda.front();
  if (t >= knot_tau.back()) return knot_lambda.back();
  const std::size_t k = knot_panel(knot_tau, t);
  if (!knot_inverse_slope.empty()) return invert_panel(*this, k, t);
  return hermite(knot_tau[k], knot_tau[k + 1], knot_lambda[k], knot_lambda[k + 1], knot_slope[k], knot_slope[k + 1], t);
}

double PulseProfile::slope(double t) const {
  if (kind == PulseKind::PiPulse || knot_tau.size() < 2) return 0.0;
  t = std::clamp(t, knot_tau.front(), knot_tau.back());
  const std::size_t k = knot_panel(knot_tau, t);
  if (!knot_inverse_slope.empty()) {
    const double x = invert_panel(*this, k, t);
    const double d = hermite_slope(knot_lambda[k], knot_lambda[k + 1], knot_tau[k], knot_tau[k + 1],
                                   knot_inverse_slope[k], knot_inverse_slope[k + 1], x);
    return 1.0 / d;
  }
  return hermite_slope(knot_tau[k], knot_tau[k + 1], knot_lambda[k], knot_lambda[k + 1], knot_slope[k],
                       knot_slope[k + 1], t);
}

PulseProfile sampled_pulse(const ParametricModel& model, std::vector<double> samples, int state_index,
                           std::string label) {
  if (samples.size() < 2) throw_config("InvalidSamples", "a sampled pulse needs at least two samples");
  PulseProfile p;
  p.kind = PulseKind::Sampled;
  p.label = std::move(label);
  p.model = model;
  p.state_index = state_index;
  p.alpha = p.beta = p.n_plus = p.n_minus = p.delta = kNaN;
  const std::size_t n = samples.size();
  p.tau = linspace(0.0, 1.0, n);
  p.lambda = std::move(samples);
  p.lambda0 = p.lambda.front();
  p.lambda1 = p.lambda.back();
  p.knot_tau = p.tau;
  p.knot_lambda = p.lambda;
  p.knot_slope.resize(n);
  const double h = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0)
      p.knot_slope[i] = (p.lambda[1] - p.lambda[0]) / h;
    else if (i + 1 == n)
      p.knot_slope[i] = (p.lambda[n - 1] - p.lambda[n - 2]) / h;
    else
      p.knot_slope[i] = (p.lambda[i + 1] - p.lambda[i - 1]) / (2 * h);
  }
  return p;
}

double hyper_adiabaticity(const ParametricModel& model, double alpha, double beta, int m, double lambda0,
                          double lambda1) {
  check_inputs(model, m, lambda0, lambda1);
  const double lo = std::min(lambda0, lambda1);
  const double hi = std::max(lambda0, lambda1);
  return build_arclength(speed_function(model, alpha, beta, m), metric_pieces(model, beta, m, lo, hi), false).total();
}

PulseProfile synthesize_pulse(const ParametricModel& model, double alpha, double beta, int m, double lambda0,
                              double lambda1, int n_samples) {
  check_inputs(model, m, lambda0, lambda1);
  if (n_samples < 64) throw_config("InvalidSamples", "n_samples must be at least 64");
  const double lo = std::min(lambda0, lambda1);
  const double hi = std::max(lambda0, lambda1);
  const bool reversed = lambda0 > lambda1;

  PulseProfile p;
  p.kind = PulseKind::Geodesic;
  p.model = model;
  p.alpha = alpha;
  p.beta = beta;
  p.n_plus = 0.5 * (alpha + beta);
  p.n_minus = 0.5 * (alpha - beta);
  p.lambda0 = lambda0;
  p.lambda1 = lambda1;
  p.state_index = m;
  std::ostringstream lab;
  lab << "alpha=" << alpha << ",beta=" << beta;
  p.label = lab.str();

  // the speed closure refers to p.model, which outlives the arclength
  const Arclength arc = build_arclength(speed_function(p.model, alpha, beta, m), metric_pieces(p.model, beta, m, lo, hi), true);
  const double delta = arc.total();
  p.delta = delta;
  const double sign = reversed ? -1.0 : 1.0;

  auto to_tau = [&](double s) { return reversed ? 1.0 - s / delta : s / delta; };

  const std::size_t n = static_cast<std::size_t>(n_samples);
  p.tau = linspace(0.0, 1.0, n);
  p.lambda.resize(n);
  std::vector<double> sample_slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = p.tau[i];
    const double target = delta * (reversed ? 1.0 - t : t);
    double lam;
    if (i == 0)
      lam = lambda0;
    else if (i + 1 == n)
      lam = lambda1;
    else
      lam = invert(arc, target);
    p.lambda[i] = lam;
    double w = kNaN;
    try {
      w = arc.speed(lam);
    } catch (const Error&) {
    }
    sample_slope[i] = sign * delta / w;
  }

  // merge arclength nodes and uniform samples into one knot set
  struct Knot {
    double t, l, m;
  };
  std::vector<Knot> knots;
  knots.reserve(arc.x.size() + n);
  for (std::size_t k = 0; k < arc.x.size(); ++k) knots.push_back({to_tau(arc.s[k]), arc.x[k], sign * delta / arc.w[k]});
  for (std::size_t i = 0; i < n; ++i) knots.push_back({p.tau[i], p.lambda[i], sample_slope[i]});
  std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.t < b.t; });
  for (const auto& k : knots) {
    if (!p.knot_tau.empty() && k.t - p.knot_tau.back() <= 1e-13) continue;
    p.knot_tau.push_back(k.t);
    p.knot_lambda.push_back(k.l);
    p.knot_slope.push_back(k.m);
  }
  p.knot_tau.front() = 0.0;
  p.knot_lambda.front() = lambda0;
  if (p.knot_tau.back() < 1.0 - 1e-13) {
    p.knot_tau.push_back(1.0);
    p.knot_lambda.push_back(lambda1);
    p.knot_slope.push_back(sample_slope.back());
  } else {
    p.knot_tau.back() = 1.0;
    p.knot_lambda.back() = lambda1;
  }
  p.knot_inverse_slope.resize(p.knot_slope.size());
  for (std::size_t k = 0; k < p.knot_slope.size(); ++k) p.knot_inverse_slope[k] = 1.0 / p.knot_slope[k];
  limit_slopes(p.knot_lambda, p.knot_tau, p.knot_inverse_slope);
  for (std::size_t k = 0; k < p.knot_slope.size(); ++k) p.knot_slope[k] = 1.0 / p.knot_inverse_slope[k];
  return p;
}

PulseProfile pi_pulse(const ParametricModel& model, int m, double lambda0, double lambda1, int n_samples) {
  check_inputs(model, m, lambda0, lambda1);
  const int other = m + 1 < model.dim ? m + 1 : m - 1;
  auto gap = [&](double lam) {
    const auto s = spectrum(model, lam);
    return std::abs(s.gap(other, m));
  };
  const double lo = std::min(lambda0, lambda1);
  const double hi = std::max(lambda0, lambda1);
  constexpr int scan = 2001;
  int best = 0;
  double best_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < scan; ++i) {
    const double g = gap(lo + (hi - lo) * i / (scan - 1));
    if (g < best_gap) {
      best_gap = g;
      best = i;
    }
  }
  // golden-section refinement inside the bracketing scan cells
  double a = lo + (hi - lo) * std::max(best - 1, 0) / (scan - 1);
  double b = lo + (hi - lo) * std::min(best + 1, scan - 1) / (scan - 1);
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = gap(c);
  double fd = gap(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = gap(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = gap(d);
    }
  }
  PulseProfile p;
  p.kind = PulseKind::PiPulse;
  p.label = "pi-pulse";
  p.model = model;
  p.alpha = p.beta = p.delta = p.n_minus = kNaN;
  p.n_plus = std::numeric_limits<double>::infinity();
  p.lambda0 = lambda0;
  p.lambda1 = lambda1;
  p.state_index = m;
  p.hold = 0.5 * (a + b);
  if (std::abs(p.hold) < 1e-12 * std::max(1.0, hi - lo)) p.hold = 0.0;
  const std::size_t n = static_cast<std::size_t>(std::max(n_samples, 2));
  p.tau = linspace(0.0, 1.0, n);
  p.lambda.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.lambda[i] = p.value(p.tau[i]);
  return p;
}

FamilyMember lz_family_member(double n_plus) {
  if (n_plus == 0.0) return {0.0, 0.0, "Linear"};
  if (n_plus == 2.0) return {2.0, 2.0, "Geometric fast-QUAD"};
  if (n_plus == 3.0) return {4.0, 2.0, "FAQUAD"};
  std::ostringstream s;
  s << "n_plus=" << n_plus;
  return {n_plus, n_plus, s.str()};
}

std::vector<PulseProfile> lz_pulse_family(const std::vector<double>& n_plus, double x, double z0, int n_samples,
                                          Exec exec) {
  if (!(z0 > 0.0)) throw_config("InvalidBoundaries", "z0 must be positive");
  const ParametricModel model = build_model("landau_zener", {{"x", x}});
  std::vector<PulseProfile> out(n_plus.size());
  for_each_index(exec, n_plus.size(), [&](std::size_t i) {
    if (!std::isfinite(n_plus[i])) {
      out[i] = pi_pulse(model, 0, -z0, z0, n_samples);
      return;
    }
    const auto f = lz_family_member(n_plus[i]);
    out[i] = synthesize_pulse(model, f.alpha, f.beta, 0, -z0, z0, n_samples);
    out[i].label = f.label;
  });
  return out;
}

double lz_metric_closed_form(double alpha, double beta, double x, double z) {
  return std::pow(std::abs(x), beta) / (std::pow(2.0, alpha) * std::pow(x * x + z * z, 0.5 * (alpha + beta)));
}

double lz_delta_closed_form(double alpha, double beta, double x, double z0) {
  const double np = 0.5 * (alpha + beta);
  const double r = z0 * z0 / (x * x);
  return 2.0 * hyp2f1(1.0, (3.0 - np) / 2.0, 1.5, -r) * z0 * std::sqrt(lz_metric_closed_form(alpha, beta, x, z0)) *
         (1.0 + r);
}

double rescaled_lz_delta_closed_form(double alpha, double beta) {
  const double nm = 0.5 * (alpha - beta);
  return std::sqrt(std::numbers::pi) * std::tgamma((1.0 + nm) / 2.0) /
         (std::pow(2.0, alpha / 2.0) * std::tgamma(1.0 + nm / 2.0));
}

}  // namespace hgeo
