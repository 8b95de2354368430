#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hgeo/dynamics.hpp"

namespace hgeo {

struct NoiseSpec {
  double sigma_x = 0.0;  // standard deviations, energy units
  double sigma_z = 0.0;
  int samples = 200;
  std::uint64_t seed = 1;
  bool antithetic = true;  // draw (v, -v) pairs
  // Per-channel standard deviation for models whose channels are not the
  // Pauli x / z axes. Unlisted channels use sigma_z.
  std::map<std::string, double> channel_sigma;
};

struct McResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> infidelity;  // per sample, in sample order
};

/// Offsets for sample `index`: one standard normal per noise channel,
/// generated from (seed, index) alone.
std::vector<double> noise_draw(std::uint64_t seed, std::size_t index, std::size_t channels);

/// Static perturbation for a draw, built from the model's noise channels.
Matrix noise_perturbation(const ParametricModel& model, const NoiseSpec& spec, const std::vector<double>& normals);

McResult quasistatic_mc(const PulseProfile& pulse, double t_f, const NoiseSpec& spec, std::optional<double> t2 = {},
                        Exec exec = Exec::Serial, const EvolutionOptions& opt = {});

struct Robustness {
  double h = 0.0;
  double g = 0.0;
  double c = 0.0;  // alpha h - beta g
};

/// First-order response of the two-level metric to a shift of the control.
Robustness robustness_constraint(const ParametricModel& model, double alpha, double beta, double lambda);

/// -(1/G) dG/d delta for H + delta dH/dlambda, by central differences.
/// Works for any dimension and agrees with robustness_constraint().c for two levels.
double robustness_fd(const ParametricModel& model, double alpha, double beta, double lambda, int m = 0,
                     double step = 1e-5);

struct FilterReport {
  std::vector<double> freq;
  std::vector<Eigen::Matrix3cd> r;  // R_ij(f)
  std::vector<Eigen::Vector3d> f;   // F_i(f) = sum_j |R_ij|^2
  double t_f = 0.0;
};

/// Log-spaced grid with `per_decade` points per decade on [f_min, f_max].
std::vector<double> log_frequency_grid(double f_min, double f_max, int per_decade = 200);

/// Control propagator samples U_c(t_k) for the noiseless pulse on a uniform grid of n_steps.
std::vector<Matrix> control_propagators(const PulseProfile& pulse, double t_f, int n_steps);

/// Filter functions of a two-level pulse. T_ij(t) = Tr[U_c^dag s_i U_c s_j] is
/// sampled on n_steps uniform steps and integrated exactly against e^{i 2 pi f t}
/// as a piecewise-linear function.
FilterReport filter_functions(const PulseProfile& pulse, double t_f, const std::vector<double>& freq,
                              int n_steps = 4096, Exec exec = Exec::Serial);

struct Susceptibility {
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();  // int S_i F_i df
  double total = 0.0;                              // sum over axes
};

/// Trapezoidal band integral with S_i(f) = amplitude_i / f^exponent.
Susceptibility susceptibility(const FilterReport& report, const Eigen::Vector3d& amplitude, double f_min,
                              double f_max, double exponent = 1.0);

}  // namespace hgeo
