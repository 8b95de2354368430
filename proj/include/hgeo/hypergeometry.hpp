#pragma once

#include <vector>

#include "hgeo/models.hpp"

namespace hgeo {

/// (alpha, beta)-hypergeometric tensor of level m at one parameter point.
struct HypergeoTensor {
  double alpha = 0.0;
  double beta = 0.0;
  int state = 0;
  Matrix values;      // Q_{mu nu}
  RealMatrix metric;  // Re Q
  RealMatrix berry;   // -2 Im Q
};

/// Full tensor. Multi-parameter models need an even integer beta
/// (OddBetaMultiParam otherwise); single-parameter models accept any real
/// beta and return the absolute-value metric.
HypergeoTensor hypergeo_tensor(const ParametricModel& model, const Params& p, double alpha, double beta, int m);

/// -2 Im Q; requires an even integer beta.
RealMatrix hyper_berry(const ParametricModel& model, const Params& p, double alpha, double beta, int m);

/// Single-parameter metric sum_{n != m} |<m|dH|n>|^beta / |E_n - E_m|^alpha
/// along control mu. Terms with a vanishing matrix element are dropped.
double hypermetric(const ParametricModel& model, const Spectrum& spec, const Params& p, double alpha, double beta,
                   int m, int mu = 0);
double hypermetric(const ParametricModel& model, double lambda, double alpha, double beta, int m);

/// Matrix elements with |M| below this fraction of max(1, |dH|) count as
/// selection-rule zeros.
inline constexpr double kSelectionRuleTol = 1e-14;

// Closed forms on the hyper-Bloch sphere.

double sphere_length_theta(double alpha);
double sphere_length_phi(double alpha, double beta, double theta);
double sphere_volume(double alpha, double beta);
double qsl_ratio(double alpha, double beta);
/// 2-D quadrature of sqrt(det G) over the sphere using the qubit model.
double sphere_volume_numeric(double alpha, double beta);

struct GeometryReport {
  double alpha = 0.0;
  double beta = 0.0;
  double length_theta = 0.0;
  double length_phi_equator = 0.0;
  double volume = 0.0;
  double qsl_ratio = 0.0;
  cplx chern_like{0.0, 0.0};
  double euler_characteristic = 0.0;  // NaN when the integral diverges (beta < 2)
};
GeometryReport sphere_lengths_volume(double alpha, double beta);
GeometryReport geometry_report(double alpha, double beta);

struct CurvatureInvariants {
  double ricci_numeric = 0.0;
  double ricci_printed = 0.0;
  double kretschmann = 0.0;
  cplx chern_like{0.0, 0.0};
  double euler_characteristic = 0.0;
};

/// 2 x Gaussian curvature of the qubit hypermetric, from finite differences
/// of the model metric with one Richardson step.
double ricci_numeric(double alpha, double beta, double theta);
/// 2^{alpha-2} beta (8 - beta (1 + cos 2 theta)) / sin^2 theta, taken as
/// published. It is not constant at (2,2) and disagrees with ricci_numeric.
double ricci_printed(double alpha, double beta, double theta);
cplx chern_like(double alpha, double beta);
/// (1/4 pi) * integral of sqrt(g) R over the sphere, with R = ricci_numeric.
double euler_characteristic(double alpha, double beta);
/// integral of sqrt(g) * ricci_printed, without normalisation.
double euler_integral_printed(double alpha, double beta);
CurvatureInvariants curvature_invariants(double alpha, double beta, double theta);

struct SurfacePoint {
  double theta, phi, x, y, z;
};
/// Validity function 1 - beta^2 sin^beta(theta) / (4 tan^2 theta).
double embedding_validity(double beta, double theta);
/// Surface of revolution with radius f = sin^{beta/2}/2^{alpha/2} and
/// height g, g(pi/2) = 0. Throws EmbeddingUndefined naming the offending
/// theta range if the validity function is negative on the grid.
std::vector<SurfacePoint> embedding(double alpha, double beta, const std::vector<double>& theta_grid,
                                    int n_phi = 32);
/// Maximal theta intervals on which the embedding exists, found on an n-point scan.
std::vector<std::pair<double, double>> embedding_windows(double beta, int n = 20001);

}  // namespace hgeo
