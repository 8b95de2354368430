#include "hgeo/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hgeo/error.hpp"

namespace hgeo {

Matrix ParametricModel::eval(const Params& p) const {
  if (static_cast<int>(p.size()) != control_count)
    throw_model("ControlCountMismatch", name + " expects " + std::to_string(control_count) + " control value(s)");
  return eval_fn(p);
}

Matrix ParametricModel::derivative(const Params& p, int mu) const {
  if (static_cast<int>(p.size()) != control_count || mu < 0 || mu >= control_count)
    throw_model("IndexOutOfRange", "control index out of range for " + name);
  return derivative_fn(p, mu);
}

Matrix ParametricModel::second_derivative(double lambda) const {
  if (second_derivative_fn) return second_derivative_fn(Params{lambda}, 0);
  const double h = 1e-4 * std::max(1.0, std::abs(lambda));
  return (derivative(Params{lambda + h}, 0) - derivative(Params{lambda - h}, 0)) / (2.0 * h);
}

std::vector<double> ParametricModel::singular_points(double a, double b) const {
  if (!singularities) return {};
  return singularities(a, b);
}

double ParametricModel::constant(const std::string& key) const {
  auto it = fixed.find(key);
  if (it == fixed.end()) throw_model("MissingConstant", name + " has no constant '" + key + "'");
  return it->second;
}

namespace {

double require(const std::map<std::string, double>& c, const std::string& model, const std::string& key) {
  auto it = c.find(key);
  if (it == c.end()) throw_model("MissingConstant", model + " requires constant '" + key + "'");
  if (!std::isfinite(it->second)) throw_model("MissingConstant", model + ": constant '" + key + "' is not finite");
  return it->second;
}

double optional(const std::map<std::string, double>& c, const std::string& key, double fallback) {
  auto it = c.find(key);
  return it == c.end() ? fallback : it->second;
}

std::vector<NoiseChannel> pauli_channels() {
  return {{"x", pauli::x()}, {"y", pauli::y()}, {"z", pauli::z()}};
}

ParametricModel make_qubit_sphere() {
  ParametricModel m;
  m.name = "qubit_sphere";
  m.dim = 2;
  m.control_count = 2;
  m.eval_fn = [](const Params& p) {
    const double th = p[0];
    const double ph = p[1];
    Matrix h(2, 2);
    h << std::cos(th), std::exp(-I * ph) * std::sin(th), std::exp(I * ph) * std::sin(th), -std::cos(th);
    return h;
  };
  m.derivative_fn = [](const Params& p, int mu) {
    const double th = p[0];
    const double ph = p[1];
    Matrix d(2, 2);
    if (mu == 0)
      d << -std::sin(th), std::exp(-I * ph) * std::cos(th), std::exp(I * ph) * std::cos(th), std::sin(th);
    else
      d << 0.0, -I * std::exp(-I * ph) * std::sin(th), I * std::exp(I * ph) * std::sin(th), 0.0;
    return d;
  };
  m.second_derivative_fn = [eval = m.eval_fn](const Params& p, int mu) -> Matrix {
    if (mu == 0) return -eval(p);
    const double th = p[0];
    const double ph = p[1];
    Matrix d(2, 2);
    d << 0.0, -std::exp(-I * ph) * std::sin(th), -std::exp(I * ph) * std::sin(th), 0.0;
    return d;
  };
  m.noise_channels = pauli_channels();
  return m;
}

ParametricModel make_landau_zener(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "landau_zener";
  m.dim = 2;
  const double x = require(c, m.name, "x");
  m.fixed = {{"x", x}};
  m.eval_fn = [x](const Params& p) -> Matrix { return p[0] * pauli::z() + x * pauli::x(); };
  m.derivative_fn = [](const Params&, int) -> Matrix { return pauli::z(); };
  m.second_derivative_fn = [](const Params&, int) -> Matrix { return Matrix::Zero(2, 2); };
  m.noise_channels = pauli_channels();
  return m;
}

ParametricModel make_rescaled_lz(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "rescaled_lz";
  m.dim = 2;
  const double x = optional(c, "x", 1.0);
  m.fixed = {{"x", x}};
  m.eval_fn = [x](const Params& p) -> Matrix { return x * (std::tan(p[0]) * pauli::z() + pauli::x()); };
  m.derivative_fn = [x](const Params& p, int) -> Matrix {
    const double s = 1.0 / std::cos(p[0]);
    return x * s * s * pauli::z();
  };
  m.second_derivative_fn = [x](const Params& p, int) -> Matrix {
    const double s = 1.0 / std::cos(p[0]);
    return 2.0 * x * s * s * std::tan(p[0]) * pauli::z();
  };
  m.singularities = [](double a, double b) {
    std::vector<double> out;
    const double pi = std::numbers::pi;
    for (double k = std::ceil((a - pi / 2) / pi); pi / 2 + k * pi <= b; k += 1.0) out.push_back(pi / 2 + k * pi);
    return out;
  };
  m.noise_channels = pauli_channels();
  return m;
}

ParametricModel make_lambda_system(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "lambda_system";
  m.dim = 3;
  const double t0 = require(c, m.name, "tau0");
  const double t1 = require(c, m.name, "tau1");
  const double t2 = require(c, m.name, "tau2");
  if (t0 == 0.0) throw_model("InvalidConstant", "lambda_system: tau0 must be nonzero");
  m.fixed = {{"tau0", t0}, {"tau1", t1}, {"tau2", t2}};
  m.eval_fn = [t0, t1, t2](const Params& p) -> Matrix {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 1) = h(1, 0) = t1;
    h(1, 2) = h(2, 1) = t2;
    h(2, 2) = p[0];
    return h / t0;
  };
  m.derivative_fn = [t0](const Params&, int) -> Matrix {
    Matrix d = Matrix::Zero(3, 3);
    d(2, 2) = 1.0 / t0;
    return d;
  };
  m.second_derivative_fn = [](const Params&, int) -> Matrix { return Matrix::Zero(3, 3); };
  m.noise_channels = {{"epsilon", m.derivative_fn({0.0}, 0)}};
  return m;
}

ParametricModel make_periodic_lz(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "periodic_lz";
  m.dim = 2;
  const double x = require(c, m.name, "x");
  m.fixed = {{"x", x}};
  m.eval_fn = [x](const Params& p) -> Matrix { return std::cos(p[0]) * pauli::z() + x * pauli::x(); };
  m.derivative_fn = [](const Params& p, int) -> Matrix { return -std::sin(p[0]) * pauli::z(); };
  m.second_derivative_fn = [](const Params& p, int) -> Matrix { return -std::cos(p[0]) * pauli::z(); };
  m.noise_channels = pauli_channels();
  return m;
}

ParametricModel make_all_to_all(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "all_to_all";
  const double nd = require(c, m.name, "N");
  const double x = require(c, m.name, "x");
  const double delta = require(c, m.name, "Delta");
  const int n = static_cast<int>(std::lround(nd));
  if (n < 1) throw_model("NonPositiveDimension", "all_to_all: N must be >= 1");
  m.dim = n;
  m.fixed = {{"N", static_cast<double>(n)}, {"x", x}, {"Delta", delta}};
  m.eval_fn = [n, x, delta](const Params& p) -> Matrix {
    Matrix h = Matrix::Constant(n, n, x);
    for (int k = 1; k <= n; ++k) h(k - 1, k - 1) = (k % 2 == 0 ? 1.0 : -1.0) * p[0] + k * delta;
    return h;
  };
  m.derivative_fn = [n](const Params&, int) -> Matrix {
    Matrix d = Matrix::Zero(n, n);
    for (int k = 1; k <= n; ++k) d(k - 1, k - 1) = k % 2 == 0 ? 1.0 : -1.0;
    return d;
  };
  m.second_derivative_fn = [n](const Params&, int) -> Matrix { return Matrix::Zero(n, n); };
  m.noise_channels = {{"z", m.derivative_fn({0.0}, 0)}};
  return m;
}

ParametricModel make_shuttling(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "shuttling";
  m.dim = 4;
  const double tc = require(c, m.name, "t_c");
  const double dl = std::abs(require(c, m.name, "Delta_L"));
  const double dr = std::abs(require(c, m.name, "Delta_R"));
  const double pl = require(c, m.name, "phi_L");
  const double pr = require(c, m.name, "phi_R");
  m.fixed = {{"t_c", tc}, {"Delta_L", dl}, {"Delta_R", dr}, {"phi_L", pl}, {"phi_R", pr}};
  const cplx tee = 0.5 * tc * (1.0 + std::exp(I * (pl - pr)));
  const cplx teg = 0.5 * tc * (std::exp(I * pl) - std::exp(I * pr));
  const cplx tgg = std::conj(tee);
  const cplx tge = -std::conj(teg);
  Matrix base = Matrix::Zero(4, 4);
  base(0, 0) = dl;
  base(1, 1) = -dl;
  base(2, 2) = dr;
  base(3, 3) = -dr;
  base(0, 2) = tee;
  base(0, 3) = teg;
  base(1, 2) = tge;
  base(1, 3) = tgg;
  base(2, 0) = std::conj(tee);
  base(3, 0) = std::conj(teg);
  base(2, 1) = std::conj(tge);
  base(3, 1) = std::conj(tgg);
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 0.5, 0.5, -0.5, -0.5;
  m.eval_fn = [base, d](const Params& p) -> Matrix { return base + p[0] * d; };
  m.derivative_fn = [d](const Params&, int) -> Matrix { return d; };
  m.second_derivative_fn = [](const Params&, int) -> Matrix { return Matrix::Zero(4, 4); };
  m.noise_channels = {{"epsilon", d}};
  return m;
}

ParametricModel make_shuttling_averaged(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "shuttling_averaged";
  m.dim = 4;
  const double tc = require(c, m.name, "t_c");
  const double sigma = require(c, m.name, "sigma");
  m.fixed = {{"t_c", tc}, {"sigma", sigma}};
  const double valley = std::sqrt(std::numbers::pi * sigma * sigma / 2.0);
  const Matrix one = pauli::identity();
  const Matrix base = 0.5 * tc * kron(pauli::x(), one) + valley * kron(one, pauli::z());
  const Matrix d = 0.5 * kron(pauli::z(), one);
  m.eval_fn = [base, d](const Params& p) -> Matrix { return base + p[0] * d; };
  m.derivative_fn = [d](const Params&, int) -> Matrix { return d; };
  m.second_derivative_fn = [](const Params&, int) -> Matrix { return Matrix::Zero(4, 4); };
  m.noise_channels = {{"epsilon", d}};
  return m;
}

ParametricModel make_chain(const std::map<std::string, double>& c) {
  ParametricModel m;
  m.name = "chain";
  const int n = static_cast<int>(std::lround(require(c, m.name, "n_sites")));
  if (n < 2) throw_model("NonPositiveDimension", "chain: n_sites must be >= 2");
  const int bond = static_cast<int>(std::lround(require(c, m.name, "bond")));
  if (bond < 0 || bond > n - 2) throw_model("IndexOutOfRange", "chain: bond must lie in [0, n_sites-2]");
  m.dim = n;
  m.fixed = {{"n_sites", static_cast<double>(n)}, {"bond", static_cast<double>(bond)}};
  std::vector<double> t(n - 1, 0.0);
  for (int j = 0; j < n - 1; ++j) {
    if (j == bond) continue;
    const std::string key = "t" + std::to_string(j);
    t[j] = require(c, m.name, key);
    m.fixed[key] = t[j];
  }
  Matrix d = Matrix::Zero(n, n);
  d(bond, bond + 1) = d(bond + 1, bond) = 1.0;
  m.eval_fn = [t, n, bond](const Params& p) -> Matrix {
    Matrix h = Matrix::Zero(n, n);
    for (int j = 0; j < n - 1; ++j) {
      const double v = j == bond ? p[0] : t[j];
      h(j, j + 1) = h(j + 1, j) = v;
    }
    return h;
  };
  m.derivative_fn = [d](const Params&, int) -> Matrix { return d; };
  m.second_derivative_fn = [n](const Params&, int) -> Matrix { return Matrix::Zero(n, n); };
  m.noise_channels = {{"bond", d}};
  return m;
}

}  // namespace

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"qubit_sphere", "landau_zener", "rescaled_lz",
                                                 "lambda_system", "periodic_lz", "all_to_all",
                                                 "shuttling", "shuttling_averaged", "chain"};
  return names;
}

ParametricModel build_model(const std::string& name, const std::map<std::string, double>& constants) {
  if (name == "qubit_sphere") return make_qubit_sphere();
  if (name == "landau_zener") return make_landau_zener(constants);
  if (name == "rescaled_lz") return make_rescaled_lz(constants);
  if (name == "lambda_system") return make_lambda_system(constants);
  if (name == "periodic_lz") return make_periodic_lz(constants);
  if (name == "all_to_all") return make_all_to_all(constants);
  if (name == "shuttling") return make_shuttling(constants);
  if (name == "shuttling_averaged") return make_shuttling_averaged(constants);
  if (name == "chain") return make_chain(constants);
  throw_model("UnknownModel", "no built-in model named '" + name + "'");
}

ParametricModel shifted(const ParametricModel& m, std::function<double(double)> w,
                        std::function<double(double)> dw) {
  ParametricModel out = m;
  out.name = m.name + "+shift";
  const int dim = m.dim;
  out.eval_fn = [f = m.eval_fn, w, dim](const Params& p) -> Matrix {
    return f(p) + w(p[0]) * Matrix::Identity(dim, dim);
  };
  out.derivative_fn = [f = m.derivative_fn, dw, dim](const Params& p, int mu) -> Matrix {
    Matrix d = f(p, mu);
    if (mu == 0) d += dw(p[0]) * Matrix::Identity(dim, dim);
    return d;
  };
  out.second_derivative_fn = nullptr;
  return out;
}

ParametricModel scaled(const ParametricModel& m, double omega) {
  ParametricModel out = m;
  out.name = m.name + "*scale";
  out.eval_fn = [f = m.eval_fn, omega](const Params& p) -> Matrix { return omega * f(p); };
  out.derivative_fn = [f = m.derivative_fn, omega](const Params& p, int mu) -> Matrix { return omega * f(p, mu); };
  if (m.second_derivative_fn)
    out.second_derivative_fn = [f = m.second_derivative_fn, omega](const Params& p, int mu) -> Matrix {
      return omega * f(p, mu);
    };
  for (auto& ch : out.noise_channels) ch.op *= omega;
  return out;
}

ParametricModel direct_sum(const ParametricModel& a, const ParametricModel& b) {
  if (a.control_count != b.control_count)
    throw_model("ControlCountMismatch", "direct_sum needs models with the same control count");
  ParametricModel out;
  out.name = a.name + "(+)" + b.name;
  out.dim = a.dim + b.dim;
  out.control_count = a.control_count;
  const int na = a.dim;
  const int nb = b.dim;
  auto block = [na, nb](const Matrix& x, const Matrix& y) {
    Matrix h = Matrix::Zero(na + nb, na + nb);
    h.topLeftCorner(na, na) = x;
    h.bottomRightCorner(nb, nb) = y;
    return h;
  };
  out.eval_fn = [fa = a.eval_fn, fb = b.eval_fn, block](const Params& p) { return block(fa(p), fb(p)); };
  out.derivative_fn = [fa = a.derivative_fn, fb = b.derivative_fn, block](const Params& p, int mu) {
    return block(fa(p, mu), fb(p, mu));
  };
  return out;
}

Spectrum spectrum_of(const Matrix& h, const Spectrum* previous) {
  if (!h.allFinite()) throw_model("NonFiniteHamiltonian", "Hamiltonian has non-finite entries");
  const double scale = h.cwiseAbs().maxCoeff();
  if (hermiticity_defect(h) > 1e-12 * (1.0 + scale))
    throw_model("NonHermitian", "Hamiltonian fails the Hermiticity check");

  auto eig = eig_hermitian(h);
  Spectrum s;
  s.energies = std::move(eig.values);
  s.vectors = std::move(eig.vectors);
  const Eigen::Index n = s.energies.size();
  const double norm = std::max(std::abs(s.energies(0)), std::abs(s.energies(n - 1)));
  for (Eigen::Index k = 1; k < n; ++k) {
    if (!(s.energies(k) - s.energies(k - 1) > 1e-12 * norm)) {
      std::ostringstream msg;
      msg << "levels " << k - 1 << " and " << k << " are degenerate (E=" << s.energies(k) << ")";
      throw_numerics("DegenerateSpectrum", msg.str());
    }
  }

  const bool continuity = previous != nullptr && previous->vectors.rows() == s.vectors.rows() &&
                          previous->vectors.cols() == s.vectors.cols();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto v = s.vectors.col(k);
    cplx ref{0.0, 0.0};
    if (continuity) ref = previous->vectors.col(k).dot(v);
    if (std::abs(ref) < 1e-14) {
      // largest-magnitude component, first index on near-ties
      const double big = v.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) >= big * (1.0 - 1e-10)) {
          ref = v(i);
          break;
        }
      }
    }
    v *= std::conj(ref) / std::abs(ref);
  }
  s.gauge_tag = continuity ? "continuity" : "max-component";
  return s;
}

Spectrum spectrum(const ParametricModel& model, const Params& p, const Spectrum* previous) {
  return spectrum_of(model.eval(p), previous);
}

cplx matrix_element(const ParametricModel& model, const Spectrum& spec, const Params& p, int mu, int n, int m) {
  const int dim = spec.size();
  if (n == m || n < 0 || m < 0 || n >= dim || m >= dim)
    throw_model("IndexOutOfRange", "matrix_element needs distinct level indices below the dimension");
  const Matrix d = model.derivative(p, mu);
  return spec.vectors.col(m).dot(d * spec.vectors.col(n));
}

Matrix finite_difference_derivative(const ParametricModel& model, const Params& p, int mu, double h) {
  Params lo = p;
  Params hi = p;
  lo[mu] -= h;
  hi[mu] += h;
  return (model.eval(hi) - model.eval(lo)) / (2.0 * h);
}

}  // namespace hgeo
