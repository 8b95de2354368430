#include "hgeo/linalg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace hgeo {

namespace pauli {
Matrix identity() { return Matrix::Identity(2, 2); }
Matrix x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix y() {
  Matrix m(2, 2);
  m << 0.0, -I, I, 0.0;
  return m;
}
Matrix z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

HermitianEig eig2(const Matrix& h) {
  // h = h0*1 + hz*sz + Re(b)*sx - Im(b)*sy with b = h(0,1)
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const cplx b = 0.5 * (h(0, 1) + std::conj(h(1, 0)));
  const double h0 = 0.5 * (a + d);
  const double hz = 0.5 * (a - d);
  const double bt = std::abs(b);
  const double r = std::hypot(hz, bt);

  HermitianEig out;
  out.values.resize(2);
  out.values << h0 - r, h0 + r;
  out.vectors.resize(2, 2);
  if (r == 0.0) {
    out.vectors.setIdentity();
    return out;
  }
  // upper state (cos t/2, e^{i phi} sin t/2), with e^{i phi} = conj(b)/|b|
  double c;
  double s;
  if (hz >= 0.0) {
    c = std::sqrt(0.5 * (1.0 + hz / r));
    s = bt / (2.0 * r * c);
  } else {
    s = std::sqrt(0.5 * (1.0 - hz / r));
    c = bt / (2.0 * r * s);
  }
  const cplx ph = bt > 0.0 ? std::conj(b) / bt : cplx{1.0, 0.0};
  out.vectors(0, 1) = c;
  out.vectors(1, 1) = ph * s;
  out.vectors(0, 0) = -std::conj(ph) * s;
  out.vectors(1, 0) = c;
  return out;
}

}  // namespace

HermitianEig eig_hermitian(const Matrix& h) {
  if (h.rows() == 2) return eig2(h);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix expm_hermitian(const Matrix& h) {
  const auto e = eig_hermitian(h);
  Vector phases(e.values.size());
  for (Eigen::Index k = 0; k < e.values.size(); ++k) phases(k) = std::exp(-I * e.values(k));
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

Matrix expm_general(const Matrix& a) { return a.exp(); }

double hermiticity_defect(const Matrix& h) { return (h - h.adjoint()).cwiseAbs().maxCoeff(); }

}  // namespace hgeo
