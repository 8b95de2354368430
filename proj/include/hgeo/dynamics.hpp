#pragma once

#include <optional>
#include <vector>

#include "hgeo/numerics.hpp"
#include "hgeo/synthesis.hpp"

namespace hgeo {

struct EvolutionOptions {
  double tolerance = 1e-8;  // fidelity change allowed when the step count doubles
  int min_steps = 128;
  int max_steps = 1 << 22;
  int trace_points = 0;     // > 0 records computational-basis populations
  std::optional<Matrix> perturbation;  // static dH added to H(t) (quasistatic noise)
  std::optional<double> target_lambda;  // control value defining the target state (default: pulse end)
};

struct EvolutionResult {
  double t_f = 0.0;
  double fidelity = 0.0;
  Vector state;       // unitary runs
  Matrix rho;         // Lindblad runs
  int steps = 0;
  std::vector<double> trace_t;
  std::vector<RealVector> trace_populations;
};

/// Eigenvector of level m of model(lambda) (+ optional perturbation).
Vector eigenstate(const ParametricModel& model, double lambda, int m, const std::optional<Matrix>& perturbation = {});

/// Time-ordered propagation of H(lambda(t / t_f)) with fourth-order Magnus
/// steps. Fidelity is measured against level m of H at lambda(1).
/// t_f = 0 returns the sudden-limit overlap.
EvolutionResult evolve_unitary(const PulseProfile& pulse, double t_f, const Vector* initial = nullptr,
                               const EvolutionOptions& opt = {});

/// Dephasing master equation d rho/dt = -i[H, rho] + (diag(rho) - rho) / T2.
EvolutionResult evolve_lindblad(const PulseProfile& pulse, double t_f, double t2, const Matrix* rho0 = nullptr,
                                const EvolutionOptions& opt = {});

struct SweepResult {
  std::vector<double> t_f;
  std::vector<double> infidelity;
  double t_opt = 0.0;
  double min_infidelity = 0.0;
};

/// Infidelity on a t_f grid; t2 <= 0 or absent means coherent evolution.
SweepResult sweep_tf(const PulseProfile& pulse, const std::vector<double>& t_f, std::optional<double> t2 = {},
                     Exec exec = Exec::Serial, const EvolutionOptions& opt = {});

struct MapEntry {
  double alpha, beta, min_infidelity, t_opt;
};

/// Minimum infidelity over a t_f grid for every (alpha, beta) pair.
std::vector<MapEntry> infidelity_map(const ParametricModel& model, const std::vector<std::pair<double, double>>& ab,
                                     int m, double lambda0, double lambda1, const std::vector<double>& t_f,
                                     std::optional<double> t2, int n_samples, Exec exec = Exec::Serial);

}  // namespace hgeo
