#include "hgeo/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hgeo/error.hpp"
#include "hgeo/hypergeometry.hpp"

namespace hgeo {

std::vector<double> noise_draw(std::uint64_t seed, std::size_t index, std::size_t channels) {
  std::mt19937_64 gen(splitmix64(seed ^ splitmix64(index + 0x51ed27ULL)));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(channels);
  for (auto& v : out) v = normal(gen);
  return out;
}

Matrix noise_perturbation(const ParametricModel& model, const NoiseSpec& spec, const std::vector<double>& normals) {
  Matrix d = Matrix::Zero(model.dim, model.dim);
  for (std::size_t c = 0; c < model.noise_channels.size() && c < normals.size(); ++c) {
    const auto& ch = model.noise_channels[c];
    double sigma = spec.sigma_z;
    if (auto it = spec.channel_sigma.find(ch.label); it != spec.channel_sigma.end())
      sigma = it->second;
    else if (ch.label == "x")
      sigma = spec.sigma_x;
    else if (ch.label == "y")
      sigma = 0.0;
    if (sigma != 0.0) d += (sigma * normals[c]) * ch.op;
  }
  return d;
}

McResult quasistatic_mc(const PulseProfile& pulse, double t_f, const NoiseSpec& spec, std::optional<double> t2,
                        Exec exec, const EvolutionOptions& opt) {
  if (spec.samples < 1) throw_config("InvalidNoise", "samples must be at least 1");
  if (!(spec.sigma_x >= 0.0) || !(spec.sigma_z >= 0.0)) throw_config("InvalidNoise", "noise sigmas must be non-negative");
  for (const auto& [label, s] : spec.channel_sigma)
    if (!(s >= 0.0)) throw_config("InvalidNoise", "noise sigma for channel " + label + " is negative");

  const std::size_t n = static_cast<std::size_t>(spec.samples);
  const std::size_t channels = pulse.model.noise_channels.size();
  McResult out;
  out.samples = spec.samples;
  out.seed = spec.seed;
  out.infidelity.assign(n, 0.0);
  for_each_index(exec, n, [&](std::size_t i) {
    // antithetic partner of sample 2k + 1 is sample 2k
    const std::size_t draw = spec.antithetic ? i / 2 : i;
    auto normals = noise_draw(spec.seed, draw, channels);
    if (spec.antithetic && i % 2 == 1)
      for (auto& v : normals) v = -v;
    EvolutionOptions o = opt;
    const Matrix d = noise_perturbation(pulse.model, spec, normals);
    if (!d.isZero(0.0)) o.perturbation = d;
    const bool open = t2 && *t2 > 0.0;
    const double f = open ? evolve_lindblad(pulse, t_f, *t2, nullptr, o).fidelity
                          : evolve_unitary(pulse, t_f, nullptr, o).fidelity;
    out.infidelity[i] = 1.0 - f;
  });

  // pairs are averaged first so the error bar reflects independent units
  std::vector<double> units;
  const std::size_t width = spec.antithetic ? 2 : 1;
  for (std::size_t i = 0; i < n; i += width) {
    const std::size_t end = std::min(n, i + width);
    double s = 0.0;
    for (std::size_t j = i; j < end; ++j) s += out.infidelity[j];
    units.push_back(s / static_cast<double>(end - i));
  }
  double sum = 0.0;
  for (double v : out.infidelity) sum += v;
  out.mean = sum / static_cast<double>(n);
  if (units.size() > 1) {
    double mu = 0.0;
    for (double u : units) mu += u;
    mu /= static_cast<double>(units.size());
    double var = 0.0;
    for (double u : units) var += (u - mu) * (u - mu);
    var /= static_cast<double>(units.size() - 1);
    out.stderr_ = std::sqrt(var / static_cast<double>(units.size()));
  }
  return out;
}

Robustness robustness_constraint(const ParametricModel& model, double alpha, double beta, double lambda) {
  if (model.dim != 2) throw_model("UnsupportedDimension", "the closed-form robustness constraint needs two levels");
  if (model.control_count != 1) throw_model("UnsupportedDimension", "the robustness constraint needs one control");
  const Spectrum s = spectrum(model, lambda);
  const Vector& lo = s.vectors.col(0);
  const Vector& hi = s.vectors.col(1);
  const Matrix v = model.derivative(lambda);
  const Matrix dv = model.second_derivative(lambda);
  const double omega = s.energies(1) - s.energies(0);
  const double v_hh = hi.dot(v * hi).real();
  const double v_ll = lo.dot(v * lo).real();
  const cplx v_lh = lo.dot(v * hi);
  const cplx dv_lh = lo.dot(dv * hi);
  Robustness r;
  r.h = (v_hh - v_ll) / omega;
  if (std::abs(v_lh) <= kSelectionRuleTol * std::max(1.0, v.cwiseAbs().maxCoeff())) {
    r.g = 0.0;
  } else {
    // perturbed states shift the element by -h; the rest comes from dV
    r.g = -r.h + (dv_lh / v_lh).real();
  }
  r.c = alpha * r.h - beta * r.g;
  return r;
}

double robustness_fd(const ParametricModel& model, double alpha, double beta, double lambda, int m, double step) {
  auto metric = [&](double d) {
    ParametricModel p = model;
    p.eval_fn = [model, d](const Params& q) { return Matrix(model.eval(q) + d * model.derivative(q, 0)); };
    p.derivative_fn = [model, d](const Params& q, int) {
      return Matrix(model.derivative(q, 0) + d * model.second_derivative(q[0]));
    };
    return hypermetric(p, lambda, alpha, beta, m);
  };
  const double g0 = metric(0.0);
  if (!(g0 > 0.0)) throw_numerics("MetricSingular", "metric vanishes at the probe point");
  const double gp = metric(step);
  const double gm = metric(-step);
  return -(gp - gm) / (2.0 * step * g0);
}

std::vector<double> log_frequency_grid(double f_min, double f_max, int per_decade) {
  if (!(f_min > 0.0) || !(f_max > f_min) || per_decade < 1)
    throw_config("BandInvalid", "frequency grid needs 0 < f_min < f_max");
  const double decades = std::log10(f_max / f_min);
  const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(decades * per_decade) + 1.0));
  auto out = logspace(std::log10(f_min), std::log10(f_max), n);
  out.front() = f_min;
  out.back() = f_max;
  return out;
}

std::vector<Matrix> control_propagators(const PulseProfile& pulse, double t_f, int n_steps) {
  if (n_steps < 2) throw_config("InvalidGrid", "propagator grid needs at least two steps");
  const double g = std::sqrt(3.0) / 6.0;
  const double c = std::sqrt(3.0) / 12.0;
  std::vector<Matrix> u(static_cast<std::size_t>(n_steps) + 1);
  u[0] = Matrix::Identity(pulse.model.dim, pulse.model.dim);
  const double dtau = 1.0 / n_steps;
  const double dt = t_f * dtau;
  for (int j = 0; j < n_steps; ++j) {
    const double ta = j * dtau;
    const Matrix h1 = pulse.model.eval(pulse.value(ta + (0.5 - g) * dtau));
    const Matrix h2 = pulse.model.eval(pulse.value(ta + (0.5 + g) * dtau));
    const Matrix k = 0.5 * dt * (h1 + h2) - I * (c * dt * dt) * (h2 * h1 - h1 * h2);
    u[j + 1] = expm_hermitian(k) * u[j];
  }
  return u;
}

namespace {

// Moments int_0^1 e^{i x s} ds and int_0^1 s e^{i x s} ds, so that
// int_0^h (a + (b - a) s / h) e^{i w s} ds = h (a m0 + (b - a) m1) with x = w h.
std::pair<cplx, cplx> phase_moments(double x) {
  if (std::abs(x) < 1e-3) {
    const cplx ix = I * x;
    const cplx m0 = 1.0 + ix / 2.0 + ix * ix / 6.0 + ix * ix * ix / 24.0 + ix * ix * ix * ix / 120.0;
    const cplx m1 = 0.5 + ix / 3.0 + ix * ix / 8.0 + ix * ix * ix / 30.0 + ix * ix * ix * ix / 144.0;
    return {m0, m1};
  }
  const cplx e = std::exp(I * x);
  return {(e - 1.0) / (I * x), e / (I * x) + (e - 1.0) / (x * x)};
}

}  // namespace

FilterReport filter_functions(const PulseProfile& pulse, double t_f, const std::vector<double>& freq, int n_steps,
                              Exec exec) {
  if (pulse.model.dim != 2) throw_model("UnsupportedDimension", "filter functions need a two-level model");
  if (!(t_f > 0.0)) throw_config("InvalidTime", "t_f must be positive");
  const auto u = control_propagators(pulse, t_f, n_steps);
  const Matrix s[3] = {pauli::x(), pauli::y(), pauli::z()};
  const std::size_t nt = u.size();
  std::vector<Eigen::Matrix3d> t(nt);
  for (std::size_t k = 0; k < nt; ++k)
    for (int i = 0; i < 3; ++i) {
      const Matrix a = u[k].adjoint() * s[i] * u[k];
      for (int j = 0; j < 3; ++j) t[k](i, j) = (a * s[j]).trace().real();
    }

  FilterReport rep;
  rep.freq = freq;
  rep.t_f = t_f;
  rep.r.assign(freq.size(), Eigen::Matrix3cd::Zero());
  rep.f.assign(freq.size(), Eigen::Vector3d::Zero());
  const double h = t_f / n_steps;
  for_each_index(exec, freq.size(), [&](std::size_t q) {
    const double w = 2.0 * std::numbers::pi * freq[q];
    const auto [m0, m1] = phase_moments(w * h);
    Eigen::Matrix3cd r = Eigen::Matrix3cd::Zero();
    for (std::size_t k = 0; k + 1 < nt; ++k) {
      const cplx phase = std::exp(I * (w * h * static_cast<double>(k)));
      const Eigen::Matrix3d a = t[k];
      const Eigen::Matrix3d d = t[k + 1] - t[k];
      r += (phase * h) * (m0 * a.cast<cplx>() + m1 * d.cast<cplx>());
    }
    rep.r[q] = r;
    for (int i = 0; i < 3; ++i) rep.f[q](i) = r.row(i).squaredNorm();
  });
  return rep;
}

Susceptibility susceptibility(const FilterReport& report, const Eigen::Vector3d& amplitude, double f_min, double f_max,
                              double exponent) {
  if (!(f_min > 0.0) || !(f_max > f_min)) throw_config("BandInvalid", "band needs 0 < f_min < f_max");
  const auto& fr = report.freq;
  if (fr.size() < 2 || f_min < fr.front() * (1.0 - 1e-12) || f_max > fr.back() * (1.0 + 1e-12))
    throw_config("BandInvalid", "band lies outside the filter-function grid");
  auto sample = [&](double f) {
    // linear interpolation of F between grid points
    std::size_t k = static_cast<std::size_t>(std::upper_bound(fr.begin(), fr.end(), f) - fr.begin());
    k = std::min(std::max<std::size_t>(k, 1), fr.size() - 1) - 1;
    const double w = std::clamp((f - fr[k]) / (fr[k + 1] - fr[k]), 0.0, 1.0);
    const Eigen::Vector3d ff = (1.0 - w) * report.f[k] + w * report.f[k + 1];
    return Eigen::Vector3d(amplitude.cwiseProduct(ff) / std::pow(f, exponent));
  };
  std::vector<double> xs{f_min};
  for (double f : fr)
    if (f > f_min && f < f_max) xs.push_back(f);
  xs.push_back(f_max);
  Susceptibility out;
  Eigen::Vector3d prev = sample(xs[0]);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const Eigen::Vector3d cur = sample(xs[k]);
    out.axis += 0.5 * (xs[k] - xs[k - 1]) * (prev + cur);
    prev = cur;
  }
  out.total = out.axis.sum();
  return out;
}

}  // namespace hgeo
