#include "hgeo/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hgeo/error.hpp"

namespace hgeo {

namespace {

double l1_error(const std::vector<double>& tau, const std::vector<double>& a, const Eigen::VectorXd& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::abs(a[i] - b(static_cast<Eigen::Index>(i)));
  return quad::trapezoid(tau, d);
}

double kept_condition(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

// unit-normalised kept members
Eigen::MatrixXd kept_columns(const BasisSet& b) {
  Eigen::MatrixXd out(b.members.rows(), static_cast<Eigen::Index>(b.kept.size()));
  for (std::size_t j = 0; j < b.kept.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = b.members.col(b.kept[j]) / b.norms(b.kept[j]);
  return out;
}

Eigen::VectorXd kept_norms(const BasisSet& b) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(b.kept.size()));
  for (std::size_t j = 0; j < b.kept.size(); ++j) out(static_cast<Eigen::Index>(j)) = b.norms(b.kept[j]);
  return out;
}

void check_expandable(const BasisSet& basis, const std::vector<double>& target) {
  if (basis.kept.empty()) throw_numerics("EmptyBasis", "basis has not been pruned or is empty");
  if (target.size() != basis.tau.size()) throw_config("GridMismatch", "target must be sampled on the basis grid");
  if (basis.condition > 1e12)
    throw_numerics("IllConditioned", "kept Gram block has condition number " + std::to_string(basis.condition));
}

}  // namespace

Eigen::VectorXd trapezoid_weights(const std::vector<double>& tau) {
  const auto n = static_cast<Eigen::Index>(tau.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double h = tau[i] - tau[i - 1];
    w(i - 1) += 0.5 * h;
    w(i) += 0.5 * h;
  }
  return w;
}

BasisSet basis_from_samples(std::vector<double> tau, Eigen::MatrixXd members, std::vector<std::string> labels) {
  if (members.cols() == 0) throw_config("EmptyBasis", "basis needs at least one member");
  if (static_cast<std::size_t>(members.rows()) != tau.size())
    throw_config("GridMismatch", "member samples do not match the grid");
  if (!members.allFinite()) throw_numerics("NonFinite", "basis member samples are not finite");
  BasisSet b;
  b.tau = std::move(tau);
  b.members = std::move(members);
  b.labels = std::move(labels);
  b.labels.resize(static_cast<std::size_t>(b.members.cols()));
  const Eigen::VectorXd w = trapezoid_weights(b.tau);
  const Eigen::MatrixXd raw = b.members.transpose() * w.asDiagonal() * b.members;
  b.norms = raw.diagonal().cwiseSqrt();
  if (!(b.norms.minCoeff() > 0.0)) throw_numerics("EmptyBasis", "basis member vanishes identically");
  const Eigen::VectorXd inv = b.norms.cwiseInverse();
  b.gram = inv.asDiagonal() * raw * inv.asDiagonal();
  b.gram = 0.5 * (b.gram + b.gram.transpose()).eval();
  return b;
}

std::vector<double> sample_on_grid(const PulseProfile& pulse, const std::vector<double>& tau) {
  std::vector<double> out(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) out[i] = pulse.value(tau[i]);
  return out;
}

BasisSet build_basis(const std::vector<double>& n_plus, double x, double z0, int grid, Exec exec) {
  if (n_plus.empty()) throw_config("EmptyGrid", "n_plus range is empty");
  if (grid < 2) throw_config("InvalidGrid", "basis grid needs at least two points");
  const auto pulses = lz_pulse_family(n_plus, x, z0, std::max(grid, 64), exec);
  std::vector<double> tau = linspace(0.0, 1.0, static_cast<std::size_t>(grid));
  Eigen::MatrixXd f(grid, static_cast<Eigen::Index>(pulses.size()));
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < pulses.size(); ++j) {
    const auto s = sample_on_grid(pulses[j], tau);
    f.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(s.data(), grid);
    labels.push_back("n_plus=" + std::to_string(n_plus[j]));
  }
  return basis_from_samples(std::move(tau), std::move(f), std::move(labels));
}

BasisSet prune(const BasisSet& basis, double threshold) {
  if (!(threshold > 0.0)) throw_config("InvalidThreshold", "pruning threshold must be positive");
  BasisSet out = basis;
  // column pivoting makes |R_ii| decreasing, so the cut is rank revealing
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.gram);
  const Eigen::MatrixXd& r = qr.matrixQR();
  const auto& perm = qr.colsPermutation().indices();
  out.kept.clear();
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    if (std::abs(r(i, i)) > threshold) out.kept.push_back(perm(i));
  std::sort(out.kept.begin(), out.kept.end());
  if (out.kept.empty()) throw_numerics("EmptyBasis", "every basis member was pruned");
  out.threshold = threshold;
  const auto k = static_cast<Eigen::Index>(out.kept.size());
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = basis.gram(out.kept[i], out.kept[j]);
  out.condition = kept_condition(g);
  return out;
}

int svd_rank(const Eigen::MatrixXd& gram, double threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++r;
  return r;
}

Expansion expand(const BasisSet& basis, const std::vector<double>& target) {
  check_expandable(basis, target);
  const Eigen::MatrixXd a = kept_columns(basis);
  const Eigen::VectorXd sw = trapezoid_weights(basis.tau).cwiseSqrt();
  const Eigen::Map<const Eigen::VectorXd> g(target.data(), static_cast<Eigen::Index>(target.size()));
  Expansion e;
  e.coefficients = (sw.asDiagonal() * a).householderQr().solve(sw.cwiseProduct(g));
  const Eigen::VectorXd rec = a * e.coefficients;
  e.reconstruction.assign(rec.data(), rec.data() + rec.size());
  e.error = l1_error(basis.tau, target, rec);
  e.residual_overlap = a.transpose() * trapezoid_weights(basis.tau).asDiagonal() * (g - rec);
  e.coefficients = e.coefficients.cwiseQuotient(kept_norms(basis));
  return e;
}

Expansion expand_split(const BasisSet& basis, const std::vector<double>& target, bool continuous) {
  check_expandable(basis, target);
  const Eigen::MatrixXd a = kept_columns(basis);
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  const Eigen::VectorXd w = trapezoid_weights(basis.tau);
  const Eigen::Map<const Eigen::VectorXd> g(target.data(), n);

  // gated design matrix [A 1(tau < 1/2) | A 1(tau >= 1/2)]
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, 2 * k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = std::sqrt(w(i));
    if (basis.tau[static_cast<std::size_t>(i)] < 0.5)
      m.block(i, 0, 1, k) = s * a.row(i);
    else
      m.block(i, k, 1, k) = s * a.row(i);
  }
  const Eigen::VectorXd rhs = w.cwiseSqrt().cwiseProduct(g);

  Eigen::VectorXd c;
  if (continuous) {
    // members at tau = 1/2 by linear interpolation; constraint v . (c1 - c2) = 0
    Eigen::Index j = 0;
    while (j + 1 < n && basis.tau[static_cast<std::size_t>(j + 1)] < 0.5) ++j;
    const double t0 = basis.tau[static_cast<std::size_t>(j)];
    const double t1 = basis.tau[static_cast<std::size_t>(j + 1)];
    const double f = (0.5 - t0) / (t1 - t0);
    const Eigen::VectorXd mid = ((1.0 - f) * a.row(j) + f * a.row(j + 1)).transpose();
    Eigen::VectorXd con(2 * k);
    con << mid, -mid;
    if (con.norm() == 0.0) {
      c = m.householderQr().solve(rhs);
    } else {
      // null-space parametrisation c = Z z of the single constraint
      Eigen::HouseholderQR<Eigen::MatrixXd> cq(con);
      const Eigen::MatrixXd q = cq.householderQ();
      const Eigen::MatrixXd z = q.rightCols(2 * k - 1);
      const Eigen::VectorXd y = (m * z).householderQr().solve(rhs);
      c = z * y;
    }
  } else {
    c = m.householderQr().solve(rhs);
  }

  Expansion e;
  e.coefficients = c.head(k);
  e.coefficients2 = c.tail(k);
  Eigen::VectorXd rec(n);
  for (Eigen::Index i = 0; i < n; ++i)
    rec(i) = basis.tau[static_cast<std::size_t>(i)] < 0.5 ? a.row(i).dot(e.coefficients) : a.row(i).dot(e.coefficients2);
  e.reconstruction.assign(rec.data(), rec.data() + rec.size());
  e.error = l1_error(basis.tau, target, rec);
  const Eigen::VectorXd r = w.cwiseProduct(g - rec);
  e.residual_overlap = m.transpose() * (r.cwiseQuotient(w.cwiseSqrt()));
  e.coefficients = e.coefficients.cwiseQuotient(kept_norms(basis));
  e.coefficients2 = e.coefficients2.cwiseQuotient(kept_norms(basis));
  return e;
}

}  // namespace hgeo
