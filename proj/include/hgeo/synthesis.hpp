#pragma once

#include <string>
#include <vector>

#include "hgeo/models.hpp"
#include "hgeo/numerics.hpp"

namespace hgeo {

enum class PulseKind {
  Geodesic,  // arclength-parametrised hypergeometric pulse
  PiPulse,   // jump to the anticrossing, hold, jump out
  Sampled,   // arbitrary samples (filtered or reconstructed pulses)
};

const char* to_string(PulseKind k);

/// Control trajectory lambda(tau), tau in [0, 1], plus synthesis metadata.
struct PulseProfile {
  PulseKind kind = PulseKind::Geodesic;
  std::string label;
  ParametricModel model;
  double alpha = 0.0;
  double beta = 0.0;
  double n_plus = 0.0;
  double n_minus = 0.0;
  double delta = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  int state_index = 0;

  // uniform output samples
  std::vector<double> tau;
  std::vector<double> lambda;

  // cubic Hermite knots used by value(); for geodesics these merge the
  // adaptive arclength nodes with the uniform samples
  std::vector<double> knot_tau;
  std::vector<double> knot_lambda;
  std::vector<double> knot_slope;
  // geodesics: d tau / d lambda at the knots. When present, tau(lambda) is
  // the cubic Hermite and value() inverts it, so the speed stays constant
  // between knots as well.
  std::vector<double> knot_inverse_slope;

  double hold = 0.0;  // PiPulse: control value held for 0 < tau < 1

  double value(double t) const;
  double slope(double t) const;  // d lambda / d tau
};

/// Builds a Sampled profile from uniform samples on [0, 1].
PulseProfile sampled_pulse(const ParametricModel& model, std::vector<double> samples, int state_index,
                           std::string label = "sampled");

/// delta = integral of sqrt(G) from lambda0 to lambda1. Singular points of
/// the model split the range; the power-law behaviour next to them is
/// integrated analytically below a cutoff.
double hyper_adiabaticity(const ParametricModel& model, double alpha, double beta, int m, double lambda0,
                          double lambda1);

PulseProfile synthesize_pulse(const ParametricModel& model, double alpha, double beta, int m, double lambda0,
                              double lambda1, int n_samples);

/// Jump-hold-jump idealisation. The hold point is the minimum gap between
/// levels m and m+1 on [lambda0, lambda1] (or m-1 for the top level).
PulseProfile pi_pulse(const ParametricModel& model, int m, double lambda0, double lambda1, int n_samples);

/// Canonical (alpha, beta) for a Landau-Zener shape with given n_plus
/// and its conventional name.
struct FamilyMember {
  double alpha;
  double beta;
  std::string label;
};
FamilyMember lz_family_member(double n_plus);

/// One Landau-Zener pulse per n_plus (z from -z0 to z0, ground state).
/// A non-finite n_plus entry yields the pi-pulse comparator.
std::vector<PulseProfile> lz_pulse_family(const std::vector<double>& n_plus, double x, double z0, int n_samples,
                                          Exec exec = Exec::Serial);

/// Closed-form LZ hyper-adiabaticity over [-z0, z0] in terms of 2F1.
double lz_delta_closed_form(double alpha, double beta, double x, double z0);
/// Closed-form LZ metric x^beta / (2^alpha (x^2+z^2)^{(alpha+beta)/2}).
double lz_metric_closed_form(double alpha, double beta, double x, double z);
/// sqrt(pi) Gamma((1+n-)/2) / (2^{alpha/2} Gamma(1+n-/2)) for rescaled LZ over [0, pi].
double rescaled_lz_delta_closed_form(double alpha, double beta);

}  // namespace hgeo
