#include "hgeo/hypergeometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hgeo/error.hpp"
#include "hgeo/numerics.hpp"

namespace hgeo {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_even_integer(double b) { return b == std::round(b) && std::fmod(std::abs(b), 2.0) == 0.0; }

cplx gap_power(double gap, double alpha) {
  if (alpha == std::round(alpha)) return std::pow(gap, alpha);
  return std::pow(cplx(gap, 0.0), alpha);
}

void check_beta_domain(double beta) {
  if (!(beta > -2.0)) throw_config("BetaOutOfDomain", "closed forms need beta > -2");
}

const ParametricModel& qubit() {
  static const ParametricModel m = build_model("qubit_sphere");
  return m;
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw_numerics("PoleSingularity", "theta must lie strictly inside (0, pi)");
}

}  // namespace

double hypermetric(const ParametricModel& model, const Spectrum& spec, const Params& p, double alpha, double beta,
                   int m, int mu) {
  if (m < 0 || m >= spec.size()) throw_model("IndexOutOfRange", "state index outside the spectrum");
  const Matrix d = model.derivative(p, mu);
  const double tol = kSelectionRuleTol * std::max(1.0, d.cwiseAbs().maxCoeff());
  const Vector dm = d.adjoint() * spec.vectors.col(m);  // <m|d|n> = dm^H v_n
  double sum = 0.0;
  const int top = model.metric_levels > 0 ? std::min(model.metric_levels, spec.size()) : spec.size();
  for (int n = 0; n < top; ++n) {
    if (n == m) continue;
    const double a = std::abs(dm.dot(spec.vectors.col(n)));
    if (a <= tol) continue;
    sum += std::pow(a, beta) / std::pow(std::abs(spec.gap(n, m)), alpha);
  }
  return sum;
}

double hypermetric(const ParametricModel& model, double lambda, double alpha, double beta, int m) {
  const Params p{lambda};
  return hypermetric(model, spectrum(model, p), p, alpha, beta, m, 0);
}

HypergeoTensor hypergeo_tensor(const ParametricModel& model, const Params& p, double alpha, double beta, int m) {
  const int k = model.control_count;
  if (k > 1 && !is_even_integer(beta))
    throw_config("OddBetaMultiParam", "multi-parameter tensor requires an even integer beta");
  const Spectrum spec = spectrum(model, p);
  if (m < 0 || m >= spec.size()) throw_model("IndexOutOfRange", "state index outside the spectrum");

  HypergeoTensor t;
  t.alpha = alpha;
  t.beta = beta;
  t.state = m;
  t.values = Matrix::Zero(k, k);
  if (k == 1) {
    t.values(0, 0) = hypermetric(model, spec, p, alpha, beta, m, 0);
  } else {
    const int half = static_cast<int>(std::lround(beta / 2.0));
    std::vector<Matrix> ders;
    double scale = 1.0;
    for (int mu = 0; mu < k; ++mu) {
      ders.push_back(model.derivative(p, mu));
      scale = std::max(scale, ders.back().cwiseAbs().maxCoeff());
    }
    const double tol = kSelectionRuleTol * scale;
    const int top = model.metric_levels > 0 ? std::min(model.metric_levels, spec.size()) : spec.size();
    for (int n = 0; n < top; ++n) {
      if (n == m) continue;
      const cplx g = gap_power(spec.gap(n, m), alpha);
      for (int mu = 0; mu < k; ++mu) {
        const cplx a = spec.vectors.col(m).dot(ders[mu] * spec.vectors.col(n));
        for (int nu = 0; nu < k; ++nu) {
          const cplx b = spec.vectors.col(n).dot(ders[nu] * spec.vectors.col(m));
          if (std::abs(a) <= tol || std::abs(b) <= tol) continue;
          t.values(mu, nu) += std::pow(a, half) * std::pow(b, half) / g;
        }
      }
    }
  }
  t.metric = t.values.real();
  t.berry = -2.0 * t.values.imag();
  return t;
}

RealMatrix hyper_berry(const ParametricModel& model, const Params& p, double alpha, double beta, int m) {
  if (!is_even_integer(beta)) throw_config("OddBetaMultiParam", "hyper-Berry curvature requires an even integer beta");
  return hypergeo_tensor(model, p, alpha, beta, m).berry;
}

double sphere_length_theta(double alpha) { return kPi / std::pow(2.0, alpha / 2.0); }

double sphere_length_phi(double alpha, double beta, double theta) {
  return kPi * std::pow(std::sin(theta), beta / 2.0) / std::pow(2.0, alpha / 2.0 - 1.0);
}

double sphere_volume(double alpha, double beta) {
  check_beta_domain(beta);
  return kPi / std::pow(2.0, alpha - 1.0) * std::sqrt(kPi) * std::tgamma((2.0 + beta) / 4.0) /
         std::tgamma(1.0 + beta / 4.0);
}

double qsl_ratio(double alpha, double beta) {
  check_beta_domain(beta);
  return std::pow(2.0, alpha - 1.0) / std::sqrt(kPi) * std::tgamma(1.0 + beta / 4.0) /
         std::tgamma((2.0 + beta) / 4.0);
}

double sphere_volume_numeric(double alpha, double beta) {
  check_beta_domain(beta);
  const auto& q = qubit();
  constexpr int n_phi = 8;
  auto over_phi = [&](double theta) {
    double s = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const Params p{theta, 2.0 * kPi * j / n_phi};
      const Spectrum spec = spectrum(q, p);
      const double gtt = hypermetric(q, spec, p, alpha, beta, 0, 0);
      const double gpp = hypermetric(q, spec, p, alpha, beta, 0, 1);
      s += std::sqrt(gtt * gpp);
    }
    return s * 2.0 * kPi / n_phi;
  };
  // symmetric about the equator; folding avoids sampling next to the rounded pi
  return 2.0 * quad::tanh_sinh(over_phi, 0.0, 0.5 * kPi, 1e-12).value;
}

double ricci_numeric(double alpha, double beta, double theta) {
  check_theta(theta);
  const auto& q = qubit();
  auto e = [&](double th) { return std::sqrt(hypermetric(q, spectrum(q, Params{th, 0.0}), Params{th, 0.0}, alpha, beta, 0, 0)); };
  auto r = [&](double th) { return std::sqrt(hypermetric(q, spectrum(q, Params{th, 0.0}), Params{th, 0.0}, alpha, beta, 0, 1)); };
  const double h0 = std::min(1e-4, 1e-2 * std::min(theta, kPi - theta));
  const double r0 = r(theta);
  const double e0 = e(theta);
  struct D {
    double r1, r2, e1;
  };
  auto diffs = [&](double h) {
    const double rp = r(theta + h), rm = r(theta - h);
    return D{(rp - rm) / (2 * h), (rp - 2 * r0 + rm) / (h * h), (e(theta + h) - e(theta - h)) / (2 * h)};
  };
  const D a = diffs(h0);
  const D b = diffs(h0 / 2);
  const double r1 = (4 * b.r1 - a.r1) / 3;
  const double r2 = (4 * b.r2 - a.r2) / 3;
  const double e1 = (4 * b.e1 - a.e1) / 3;
  // K = -(1/(e r)) d/dtheta (r'/e)
  const double k = -(r2 / e0 - r1 * e1 / (e0 * e0)) / (e0 * r0);
  return 2.0 * k;
}

double ricci_printed(double alpha, double beta, double theta) {
  check_theta(theta);
  const double s = std::sin(theta);
  return std::pow(2.0, alpha - 2.0) * beta * (8.0 - beta * (1.0 + std::cos(2.0 * theta))) / (s * s);
}

cplx chern_like(double alpha, double beta) {
  check_beta_domain(beta);
  const cplx phase = std::exp(cplx(0.0, -kPi * beta / 4.0));
  return phase / std::pow(2.0, alpha) * std::sqrt(kPi) * std::tgamma((2.0 + beta) / 4.0) /
         std::tgamma(1.0 + beta / 4.0);
}

namespace {

double sqrt_det(double alpha, double beta, double theta) {
  return std::pow(std::sin(theta), beta / 2.0) / std::pow(2.0, alpha);
}

}  // namespace

double euler_characteristic(double alpha, double beta) {
  if (beta < 2.0) return std::numeric_limits<double>::quiet_NaN();
  const double cut = 1e-7;
  auto f = [&](double th) { return sqrt_det(alpha, beta, th) * ricci_numeric(alpha, beta, th); };
  const double integral = quad::gauss_kronrod(f, cut, kPi - cut, 1e-10, 1e-12).value;
  return 2.0 * kPi * integral / (4.0 * kPi);
}

double euler_integral_printed(double alpha, double beta) {
  const double cut = 1e-7;
  auto f = [&](double th) { return sqrt_det(alpha, beta, th) * ricci_printed(alpha, beta, th); };
  return 2.0 * kPi * quad::gauss_kronrod(f, cut, kPi - cut, 1e-10, 1e-12).value;
}

CurvatureInvariants curvature_invariants(double alpha, double beta, double theta) {
  CurvatureInvariants c;
  c.ricci_numeric = ricci_numeric(alpha, beta, theta);
  c.ricci_printed = ricci_printed(alpha, beta, theta);
  c.kretschmann = c.ricci_printed * c.ricci_printed;
  c.chern_like = chern_like(alpha, beta);
  c.euler_characteristic = euler_characteristic(alpha, beta);
  return c;
}

GeometryReport sphere_lengths_volume(double alpha, double beta) {
  GeometryReport g;
  g.alpha = alpha;
  g.beta = beta;
  g.length_theta = sphere_length_theta(alpha);
  g.length_phi_equator = sphere_length_phi(alpha, beta, kPi / 2.0);
  g.volume = sphere_volume(alpha, beta);
  g.qsl_ratio = qsl_ratio(alpha, beta);
  return g;
}

GeometryReport geometry_report(double alpha, double beta) {
  GeometryReport g = sphere_lengths_volume(alpha, beta);
  g.chern_like = chern_like(alpha, beta);
  g.euler_characteristic = euler_characteristic(alpha, beta);
  return g;
}

double embedding_validity(double beta, double theta) {
  const double t = std::tan(theta);
  return 1.0 - beta * beta * std::pow(std::sin(theta), beta) / (4.0 * t * t);
}

std::vector<SurfacePoint> embedding(double alpha, double beta, const std::vector<double>& theta_grid, int n_phi) {
  double bad_lo = kPi;
  double bad_hi = 0.0;
  for (double th : theta_grid) {
    if (!(th > 0.0 && th < kPi) || embedding_validity(beta, th) < -1e-12) {
      bad_lo = std::min(bad_lo, th);
      bad_hi = std::max(bad_hi, th);
    }
  }
  if (bad_lo <= bad_hi) {
    std::ostringstream msg;
    msg << "embedding undefined for theta in [" << bad_lo << ", " << bad_hi << "]";
    throw_numerics("EmbeddingUndefined", msg.str());
  }
  const double scale = std::pow(2.0, -alpha);
  auto slope = [&](double th) { return std::sqrt(std::max(embedding_validity(beta, th), 0.0) * scale); };
  std::vector<SurfacePoint> out;
  out.reserve(theta_grid.size() * static_cast<std::size_t>(n_phi));
  for (double th : theta_grid) {
    const double f = std::sqrt(std::pow(std::sin(th), beta) * scale);
    const double g = -quad::gauss_kronrod(slope, kPi / 2.0, th, 1e-12, 1e-12).value;
    for (int j = 0; j < n_phi; ++j) {
      const double ph = 2.0 * kPi * j / n_phi;
      out.push_back({th, ph, f * std::cos(ph), f * std::sin(ph), g});
    }
  }
  return out;
}

std::vector<std::pair<double, double>> embedding_windows(double beta, int n) {
  std::vector<std::pair<double, double>> out;
  bool open = false;
  double start = 0.0;
  double last = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double th = kPi * i / (n + 1);
    const bool ok = embedding_validity(beta, th) >= -1e-12;
    if (ok && !open) {
      open = true;
      start = th;
    }
    if (!ok && open) {
      out.emplace_back(start, last);
      open = false;
    }
    last = th;
  }
  if (open) out.emplace_back(start, last);
  return out;
}

}  // namespace hgeo
