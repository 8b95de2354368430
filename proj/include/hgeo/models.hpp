#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hgeo/linalg.hpp"

namespace hgeo {

using Params = std::vector<double>;

/// Named constant perturbation operator (quasistatic noise channel).
struct NoiseChannel {
  std::string label;
  Matrix op;
};

/// A Hamiltonian family H(lambda; fixed constants) with analytic derivatives.
/// Built-ins are created with build_model(); all members are immutable after
/// construction and the callables are safe to share between threads.
struct ParametricModel {
  std::string name;
  int dim = 0;
  std::map<std::string, double> fixed;
  int control_count = 1;
  int metric_levels = 0;  // levels entering the metric sums (lowest k); 0 keeps all

  std::function<Matrix(const Params&)> eval_fn;
  std::function<Matrix(const Params&, int)> derivative_fn;
  std::function<Matrix(const Params&, int)> second_derivative_fn;  // d^2 H / d lambda_mu^2
  // Control values in [a, b] where H diverges (rescaled LZ).
  std::function<std::vector<double>(double, double)> singularities;
  std::vector<NoiseChannel> noise_channels;

  Matrix eval(const Params& p) const;
  Matrix eval(double lambda) const { return eval(Params{lambda}); }
  Matrix derivative(const Params& p, int mu) const;
  Matrix derivative(double lambda) const { return derivative(Params{lambda}, 0); }
  Matrix second_derivative(double lambda) const;
  std::vector<double> singular_points(double a, double b) const;
  double constant(const std::string& key) const;
};

/// Names accepted by build_model.
const std::vector<std::string>& model_names();

/// Constructs a built-in model. Missing constants raise ModelError/MissingConstant,
/// unknown names ModelError/UnknownModel.
///
/// qubit_sphere        controls (theta, phi)
/// landau_zener        x;                  control z
/// rescaled_lz         x;                  control theta, H = x (tan theta sz + sx)
/// lambda_system       tau0, tau1, tau2;   control epsilon
/// periodic_lz         x;                  control z, H = cos z sz + x sx
/// all_to_all          N, x, Delta;        control z
/// shuttling           t_c, Delta_L, Delta_R, phi_L, phi_R; control epsilon
/// shuttling_averaged  t_c, sigma;         control epsilon
/// chain               n_sites, bond, t0 .. t{n_sites-2}; control replaces t{bond}
ParametricModel build_model(const std::string& name, const std::map<std::string, double>& constants = {});

/// H + w(lambda) * 1, used to check the shift symmetry of the geometry.
ParametricModel shifted(const ParametricModel& m, std::function<double(double)> w,
                        std::function<double(double)> dw);
/// Omega * H.
ParametricModel scaled(const ParametricModel& m, double omega);
/// Block-diagonal model diag(H_a, H_b) sharing one control.
ParametricModel direct_sum(const ParametricModel& a, const ParametricModel& b);

/// Sorted eigenvalues and gauge-fixed eigenvectors at one parameter point.
struct Spectrum {
  RealVector energies;
  Matrix vectors;  // columns
  std::string gauge_tag;

  int size() const { return static_cast<int>(energies.size()); }
  double gap(int n, int m) const { return energies(n) - energies(m); }
};

/// Diagonalises a Hermitian matrix. Without `previous` every eigenvector has
/// its largest component real positive; with `previous` the phase is chosen
/// so that the overlap with the previous vector is real and non-negative.
Spectrum spectrum_of(const Matrix& h, const Spectrum* previous = nullptr);
Spectrum spectrum(const ParametricModel& model, const Params& p, const Spectrum* previous = nullptr);
inline Spectrum spectrum(const ParametricModel& model, double lambda, const Spectrum* previous = nullptr) {
  return spectrum(model, Params{lambda}, previous);
}

/// <psi_m| dH/d lambda_mu |psi_n>.
cplx matrix_element(const ParametricModel& model, const Spectrum& spec, const Params& p, int mu, int n, int m);

/// Central-difference derivative of eval, for tests and diagnostics.
Matrix finite_difference_derivative(const ParametricModel& model, const Params& p, int mu, double h = 1e-6);

}  // namespace hgeo
