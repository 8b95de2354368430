#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hgeo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr cplx I{0.0, 1.0};

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Kronecker product of two square complex matrices.
Matrix kron(const Matrix& a, const Matrix& b);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
/// The 2x2 case is handled in closed form so eigenvector components stay
/// accurate to relative precision even when |H| is large compared to the gap.
struct HermitianEig {
  RealVector values;
  Matrix vectors;
};
HermitianEig eig_hermitian(const Matrix& h);

/// exp(-i * h) for Hermitian h.
Matrix expm_hermitian(const Matrix& h);

/// exp(a) for a general (small, dense) complex matrix.
Matrix expm_general(const Matrix& a);

/// Largest absolute deviation from Hermiticity, max |h_ij - conj(h_ji)|.
double hermiticity_defect(const Matrix& h);

}  // namespace hgeo
