#pragma once

#include <vector>

#include "hgeo/synthesis.hpp"

namespace hgeo {

struct LevelPair {
  int n = 0;  // excited level
  int m = 0;  // driven level
  std::vector<double> a_tilde;  // |<m|d_tau H|n>| / (E_n - E_m)^2 on the pulse grid
  double a0 = 0.0;              // value at tau = 0
  double a1 = 0.0;              // value at tau = 1
  double a_max = 0.0;
  double phi = 0.0;             // integral of |E_n - E_m| over tau
  std::vector<double> resonances;  // 2 pi k / phi, k = 1..k_max
};

struct AdiabaticReport {
  std::vector<double> tau;
  std::vector<LevelPair> pairs;
  int dim = 0;
  double a_tilde_0 = 0.0;  // max over pairs and both endpoints, used by the bound
  double t_adiab = 0.0;

  /// 4 a0^2 (N - 1) / t_f^2
  double bound(double t_f) const;
};

/// Rescaled adiabaticity of level m against every other level, sampled on
/// the pulse grid. Pi-pulses are frozen between the jumps, so the trace
/// vanishes there.
std::vector<LevelPair> adiabaticity_trace(const PulseProfile& pulse);

/// Time-averaged gap between levels n and m along the pulse.
double averaged_gap(const PulseProfile& pulse, int n, int m);

std::vector<double> resonance_times(const PulseProfile& pulse, int n, int k_max);

double infidelity_bound(const PulseProfile& pulse, double t_f);

double adiabatic_threshold(const PulseProfile& pulse);

AdiabaticReport adiabatic_report(const PulseProfile& pulse, int k_max = 5);

/// Closed form of a~(0) for the LZ family with symmetric boundaries +-z0.
double lz_a_tilde_0_closed_form(double n_plus, double x, double z0);

}  // namespace hgeo
