#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hgeo/numerics.hpp"
#include "hgeo/synthesis.hpp"

namespace hgeo {

constexpr int kBasisGrid = 2048;

struct BasisSet {
  std::vector<double> tau;          // shared uniform grid on [0, 1]
  Eigen::MatrixXd members;          // one column per function
  std::vector<std::string> labels;
  Eigen::VectorXd norms;            // L2 norm of each member
  Eigen::MatrixXd gram;             // inner products of the unit-normalised members
  std::vector<int> kept;            // filled by prune()
  double threshold = 0.0;
  double condition = 0.0;           // of the kept Gram block

  int size() const { return static_cast<int>(members.cols()); }
};

/// Trapezoid weights of a grid.
Eigen::VectorXd trapezoid_weights(const std::vector<double>& tau);

/// Wraps sampled functions (columns over `tau`) and computes their Gram matrix.
BasisSet basis_from_samples(std::vector<double> tau, Eigen::MatrixXd members, std::vector<std::string> labels);

/// Landau-Zener pulses z(tau) from -z0 to z0, one per n_plus entry.
BasisSet build_basis(const std::vector<double>& n_plus, double x, double z0, int grid = kBasisGrid,
                     Exec exec = Exec::Serial);

/// Column-pivoted QR of the Gram matrix; columns with |R_ii| > threshold are kept.
/// Throws IllConditioned when the kept block has condition number above 1e12.
BasisSet prune(const BasisSet& basis, double threshold = 1e-10);

/// Rank of the Gram matrix from its singular values (cross-check for prune).
int svd_rank(const Eigen::MatrixXd& gram, double threshold = 1e-10);

struct Expansion {
  Eigen::VectorXd coefficients;   // over the kept members
  Eigen::VectorXd coefficients2;  // second half (split expansion only)
  std::vector<double> reconstruction;
  double error = 0.0;             // int |g - g'| dtau
  Eigen::VectorXd residual_overlap;  // <g - g', f_i> for kept i
};

/// Least-squares expansion of g (samples on the basis grid) in the kept members.
/// Solves the normal system G c = b through a QR factorisation of the weighted
/// samples. Coefficients refer to the raw (unnormalised) members.
Expansion expand(const BasisSet& basis, const std::vector<double>& target);

/// Separate coefficient sets for tau < 1/2 and tau >= 1/2. With `continuous`
/// the two expansions agree at tau = 1/2.
Expansion expand_split(const BasisSet& basis, const std::vector<double>& target, bool continuous = true);

/// Samples a pulse on the basis grid.
std::vector<double> sample_on_grid(const PulseProfile& pulse, const std::vector<double>& tau);

}  // namespace hgeo
