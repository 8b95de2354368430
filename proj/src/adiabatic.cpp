#include "hgeo/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "hgeo/error.hpp"

namespace hgeo {

namespace {

double a_tilde_at(const PulseProfile& pulse, double tau, int n, std::optional<Spectrum>& prev) {
  const double lam = pulse.value(tau);
  const Spectrum s = spectrum(pulse.model, lam, prev ? &*prev : nullptr);
  prev = s;
  const double rate = pulse.slope(tau);
  if (rate == 0.0) return 0.0;
  const int m = pulse.state_index;
  const double element = std::abs(matrix_element(pulse.model, s, Params{lam}, 0, n, m));
  const double gap = s.gap(n, m);
  return element * std::abs(rate) / (gap * gap);
}

}  // namespace

std::vector<LevelPair> adiabaticity_trace(const PulseProfile& pulse) {
  const int m = pulse.state_index;
  const int dim = pulse.model.dim;
  std::vector<LevelPair> out;
  for (int n = 0; n < dim; ++n) {
    if (n == m) continue;
    LevelPair lp;
    lp.n = n;
    lp.m = m;
    lp.a_tilde.resize(pulse.tau.size());
    std::optional<Spectrum> prev;
    for (std::size_t i = 0; i < pulse.tau.size(); ++i)
      lp.a_tilde[i] = pulse.kind == PulseKind::PiPulse ? 0.0 : a_tilde_at(pulse, pulse.tau[i], n, prev);
    lp.a0 = lp.a_tilde.front();
    lp.a1 = lp.a_tilde.back();
    lp.a_max = *std::max_element(lp.a_tilde.begin(), lp.a_tilde.end());
    out.push_back(std::move(lp));
  }
  return out;
}

double averaged_gap(const PulseProfile& pulse, int n, int m) {
  auto gap = [&](double tau) { return std::abs(spectrum(pulse.model, pulse.value(tau)).gap(n, m)); };
  if (pulse.kind == PulseKind::PiPulse) return gap(0.5);
  const auto r = quad::gauss_kronrod(gap, 0.0, 1.0, 1e-13, 1e-12, 14);
  if (!(r.value > 0.0)) throw_numerics("DegenerateSpectrum", "averaged gap vanishes");
  return r.value;
}

std::vector<double> resonance_times(const PulseProfile& pulse, int n, int k_max) {
  if (k_max < 1) throw_config("InvalidGrid", "k_max must be at least 1");
  const double phi = averaged_gap(pulse, n, pulse.state_index);
  std::vector<double> out(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) out[k - 1] = 2.0 * std::numbers::pi * k / phi;
  return out;
}

double AdiabaticReport::bound(double t_f) const {
  return 4.0 * a_tilde_0 * a_tilde_0 * (dim - 1) / (t_f * t_f);
}

AdiabaticReport adiabatic_report(const PulseProfile& pulse, int k_max) {
  AdiabaticReport r;
  r.tau = pulse.tau;
  r.dim = pulse.model.dim;
  r.pairs = adiabaticity_trace(pulse);
  for (auto& lp : r.pairs) {
    lp.phi = averaged_gap(pulse, lp.n, lp.m);
    lp.resonances.clear();
    for (int k = 1; k <= k_max; ++k) lp.resonances.push_back(2.0 * std::numbers::pi * k / lp.phi);
    r.a_tilde_0 = std::max({r.a_tilde_0, lp.a0, lp.a1});
    r.t_adiab = std::max(r.t_adiab, lp.a_max / 0.01);
  }
  return r;
}

double infidelity_bound(const PulseProfile& pulse, double t_f) {
  double a0 = 0.0;
  for (const auto& lp : adiabaticity_trace(pulse)) a0 = std::max({a0, lp.a0, lp.a1});
  return 4.0 * a0 * a0 * (pulse.model.dim - 1) / (t_f * t_f);
}

double adiabatic_threshold(const PulseProfile& pulse) {
  double t = 0.0;
  for (const auto& lp : adiabaticity_trace(pulse)) t = std::max(t, lp.a_max / 0.01);
  return t;
}

double lz_a_tilde_0_closed_form(double n_plus, double x, double z0) {
  return 0.5 * std::pow(x, 1.0 - n_plus) * z0 * std::pow(x * x + z0 * z0, 0.5 * (n_plus - 3.0)) *
         hyp2f1(0.5, 0.5 * n_plus, 1.5, -z0 * z0 / (x * x));
}

}  // namespace hgeo
