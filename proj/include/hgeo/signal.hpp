#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hgeo/dynamics.hpp"
#include "hgeo/numerics.hpp"
#include "hgeo/synthesis.hpp"

namespace hgeo {

struct FilterSpec {
  int order = 3;
  double f_c = 1.0;  // cutoff in units of the model energy scale
};

enum class Padding {
  Boundary,  // hold the first / last sample before and after the record
  Periodic,  // treat the record as one period (tone tests)
};

/// Analog Butterworth response H(2 pi i f), unit DC gain, causal.
std::complex<double> butterworth_response(double f, const FilterSpec& spec);

/// Single-pass causal low-pass of uniformly spaced samples via FFT.
/// Throws NumericsError/GridTooCoarse when f_c exceeds a quarter of Nyquist.
std::vector<double> butterworth_filter(std::span<const double> samples, double dt, const FilterSpec& spec,
                                       Padding padding = Padding::Boundary);

/// Time for the slowest filter pole to decay by 1e-4.
double settle_time(const FilterSpec& spec);

struct FilteredPulse {
  PulseProfile pulse;     // Sampled, spans [0, duration]
  double duration = 0.0;  // t_f plus the settling tail
};

/// Filters pulse(t / t_f) sampled on its uniform tau grid. The output keeps
/// running for settle_time after t_f with the input held at lambda(1), so
/// the delayed response completes.
FilteredPulse butterworth_apply(const PulseProfile& pulse, double t_f, const FilterSpec& spec);

struct SlewRate {
  double numeric = 0.0;
  double analytic = 0.0;
  double lambda_at_max = 0.0;  // control value where the analytic maximum sits
};

/// numeric: max |d lambda / dt| by finite differences on n_eval uniform points
/// (second order, one-sided at the ends). analytic: delta / (t_f min sqrt(G)),
/// with the closed form for Landau-Zener pulses.
SlewRate slew_rate(const PulseProfile& pulse, double t_f, int n_eval = 16385);

/// 2^{alpha/2} delta x^{-beta/2} max (x^2+z^2)^{n_plus/2} / t_f over z in [-z0, z0].
double lz_slew_closed_form(double alpha, double beta, double x, double z0, double t_f);

struct Spectrogram {
  std::vector<double> t;                  // window centres
  std::vector<double> f;                  // frequency bins (f > 0)
  std::vector<std::vector<double>> db;    // [window][bin], relative to the global maximum
};

struct BandwidthResult {
  double f_max = 0.0;
  Spectrogram stft;
};

/// Short-time spectrum of lambda from the spectrum of d lambda/dt divided by
/// 2 pi f. Hamming windows of `window` time units with the given overlap.
BandwidthResult bandwidth(std::span<const double> samples, double dt, double window, double threshold_db = -20.0,
                          double overlap = 0.75);
/// window <= 0 selects t_f / 8.
BandwidthResult bandwidth(const PulseProfile& pulse, double t_f, double window = 0.0, double threshold_db = -20.0);

struct FilteredMapEntry {
  double n_plus, f_c, min_infidelity, t_opt;
};

/// Landau-Zener pulses (z from -z0 to z0) for every (n_plus, f_c): filter, evolve
/// (with dephasing when t2 is set) over the t_f grid and keep the minimum infidelity.
/// Each run lasts t_f plus the filter settling time; t_opt reports the nominal t_f.
/// Fidelity is measured against the ground state at z0. A non-finite n_plus is the pi-pulse.
std::vector<FilteredMapEntry> filtered_fidelity_map(double x, double z0, const std::vector<double>& n_plus,
                                                    const std::vector<double>& f_c, const std::vector<double>& t_f,
                                                    std::optional<double> t2, int order = 3, int n_samples = 1024,
                                                    Exec exec = Exec::Serial);

/// Same sweep for a single pulse and filter; returns the full curve.
SweepResult filtered_sweep(const PulseProfile& pulse, const FilterSpec& spec, const std::vector<double>& t_f,
                           std::optional<double> t2);

}  // namespace hgeo
