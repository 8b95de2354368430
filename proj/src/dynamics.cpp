#include "hgeo/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "hgeo/error.hpp"

namespace hgeo {

namespace {

const double kGauss = std::sqrt(3.0) / 6.0;
const double kComm = std::sqrt(3.0) / 12.0;

Matrix hamiltonian(const PulseProfile& p, double tau, const std::optional<Matrix>& pert) {
  Matrix h = p.model.eval(p.value(tau));
  if (pert) h += *pert;
  return h;
}

// Step nodes in tau: half of the resolution uniform in tau, half following
// the variation of lambda, so steep parts of a pulse get proportionally more steps.
std::vector<double> step_nodes(const PulseProfile& p, int n) {
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  const auto& kt = p.knot_tau;
  const auto& kl = p.knot_lambda;
  if (p.kind == PulseKind::PiPulse || kt.size() < 2) {
    for (int j = 0; j <= n; ++j) out[j] = static_cast<double>(j) / n;
    return out;
  }
  std::vector<double> w(kt.size(), 0.0);
  double variation = 0.0;
  for (std::size_t k = 1; k < kt.size(); ++k) variation += std::abs(kl[k] - kl[k - 1]);
  const double scale = variation > 0.0 ? 1.0 / variation : 0.0;
  for (std::size_t k = 1; k < kt.size(); ++k)
    w[k] = w[k - 1] + (kt[k] - kt[k - 1]) + scale * std::abs(kl[k] - kl[k - 1]);
  const double total = w.back();
  std::size_t k = 0;
  for (int j = 0; j <= n; ++j) {
    const double target = total * j / n;
    while (k + 2 < w.size() && w[k + 1] < target) ++k;
    const double span = w[k + 1] - w[k];
    const double f = span > 0.0 ? std::clamp((target - w[k]) / span, 0.0, 1.0) : 0.0;
    out[j] = kt[k] + f * (kt[k + 1] - kt[k]);
  }
  out.front() = 0.0;
  out.back() = 1.0;
  return out;
}

template <class Run>
auto converge(const EvolutionOptions& opt, Run run) {
  int n = std::max(opt.min_steps, 2);
  auto prev = run(n);
  while (true) {
    n *= 2;
    if (n > opt.max_steps) throw_numerics("NonConvergent", "step doubling did not reach the fidelity tolerance");
    auto cur = run(n);
    if (std::abs(cur.fidelity - prev.fidelity) < opt.tolerance) return cur;
    prev = std::move(cur);
  }
}

double clamp01(double f) { return std::clamp(f, 0.0, 1.0); }

}  // namespace

Vector eigenstate(const ParametricModel& model, double lambda, int m, const std::optional<Matrix>& perturbation) {
  Matrix h = model.eval(lambda);
  if (perturbation) h += *perturbation;
  const Spectrum s = spectrum_of(h);
  if (m < 0 || m >= s.size()) throw_model("IndexOutOfRange", "state index outside the model dimension");
  return s.vectors.col(m);
}

EvolutionResult evolve_unitary(const PulseProfile& pulse, double t_f, const Vector* initial,
                               const EvolutionOptions& opt) {
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw_config("InvalidTime", "t_f must be finite and non-negative");
  const int m = pulse.state_index;
  const Vector psi0 = initial ? *initial : eigenstate(pulse.model, pulse.value(0.0), m, opt.perturbation);
  const Vector target = eigenstate(pulse.model, opt.target_lambda.value_or(pulse.value(1.0)), m, opt.perturbation);
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw_config("InvalidState", "initial state must be normalised");

  auto finish = [&](EvolutionResult r) {
    r.t_f = t_f;
    r.fidelity = clamp01(std::norm(target.dot(r.state)));
    return r;
  };
  if (t_f == 0.0) {
    EvolutionResult r;
    r.state = psi0;
    return finish(std::move(r));
  }

  auto run = [&](int n) {
    const auto nodes = step_nodes(pulse, n);
    EvolutionResult r;
    r.steps = n;
    Vector psi = psi0;
    const int every = opt.trace_points > 0 ? std::max(1, n / opt.trace_points) : 0;
    for (int j = 0; j < n; ++j) {
      const double ta = nodes[j];
      const double tb = nodes[j + 1];
      const double dtau = tb - ta;
      if (dtau <= 0.0) continue;
      const double dt = t_f * dtau;
      const Matrix h1 = hamiltonian(pulse, ta + (0.5 - kGauss) * dtau, opt.perturbation);
      const Matrix h2 = hamiltonian(pulse, ta + (0.5 + kGauss) * dtau, opt.perturbation);
      const Matrix k = 0.5 * dt * (h1 + h2) - I * (kComm * dt * dt) * (h2 * h1 - h1 * h2);
      psi = expm_hermitian(k) * psi;
      if (every > 0 && (j + 1) % every == 0) {
        r.trace_t.push_back(t_f * tb);
        r.trace_populations.push_back(psi.cwiseAbs2());
      }
    }
    r.state = psi;
    return finish(std::move(r));
  };
  auto r = converge(opt, run);
  if (std::abs(r.state.norm() - 1.0) > 1e-8) throw_numerics("NonPhysicalState", "state norm drifted beyond 1e-8");
  return r;
}

EvolutionResult evolve_lindblad(const PulseProfile& pulse, double t_f, double t2, const Matrix* rho0,
                                const EvolutionOptions& opt) {
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw_config("InvalidTime", "t_f must be finite and non-negative");
  if (!(t2 > 0.0)) throw_config("InvalidT2", "T2 must be positive");
  const int m = pulse.state_index;
  const int n_dim = pulse.model.dim;
  Matrix rho_init;
  if (rho0) {
    rho_init = *rho0;
  } else {
    const Vector v = eigenstate(pulse.model, pulse.value(0.0), m, opt.perturbation);
    rho_init = v * v.adjoint();
  }
  const Vector target = eigenstate(pulse.model, opt.target_lambda.value_or(pulse.value(1.0)), m, opt.perturbation);

  const int nn = n_dim * n_dim;
  Vector dephase(nn);
  for (int j = 0; j < n_dim; ++j)
    for (int i = 0; i < n_dim; ++i) dephase(i + n_dim * j) = i == j ? 0.0 : -1.0 / t2;
  const Matrix id = Matrix::Identity(n_dim, n_dim);
  auto liouvillian = [&](double tau) {
    const Matrix h = hamiltonian(pulse, tau, opt.perturbation);
    Matrix l = -I * (kron(id, h) - kron(h.transpose(), id));
    l.diagonal() += dephase;
    return l;
  };

  auto finish = [&](EvolutionResult r) {
    r.t_f = t_f;
    r.fidelity = clamp01(target.dot(r.rho * target).real());
    return r;
  };
  if (t_f == 0.0) {
    EvolutionResult r;
    r.rho = rho_init;
    return finish(std::move(r));
  }

  auto run = [&](int n) {
    const auto nodes = step_nodes(pulse, n);
    EvolutionResult r;
    r.steps = n;
    Vector v = Eigen::Map<const Vector>(rho_init.data(), nn);
    const int every = opt.trace_points > 0 ? std::max(1, n / opt.trace_points) : 0;
    for (int j = 0; j < n; ++j) {
      const double ta = nodes[j];
      const double dtau = nodes[j + 1] - ta;
      if (dtau <= 0.0) continue;
      const double dt = t_f * dtau;
      const Matrix l1 = liouvillian(ta + (0.5 - kGauss) * dtau);
      const Matrix l2 = liouvillian(ta + (0.5 + kGauss) * dtau);
      const Matrix omega = 0.5 * dt * (l1 + l2) + (kComm * dt * dt) * (l2 * l1 - l1 * l2);
      v = expm_general(omega) * v;
      if (every > 0 && (j + 1) % every == 0) {
        r.trace_t.push_back(t_f * nodes[j + 1]);
        RealVector pop(n_dim);
        for (int i = 0; i < n_dim; ++i) pop(i) = v(i + n_dim * i).real();
        r.trace_populations.push_back(pop);
      }
    }
    r.rho = Eigen::Map<const Matrix>(v.data(), n_dim, n_dim);
    return finish(std::move(r));
  };
  auto r = converge(opt, run);
  const cplx tr = r.rho.trace();
  if (std::abs(tr - 1.0) > 1e-8) throw_numerics("NonPhysicalState", "trace of rho drifted beyond 1e-8");
  const Matrix herm = 0.5 * (r.rho + r.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) throw_numerics("NonPhysicalState", "rho has a negative eigenvalue");
  return r;
}

SweepResult sweep_tf(const PulseProfile& pulse, const std::vector<double>& t_f, std::optional<double> t2, Exec exec,
                     const EvolutionOptions& opt) {
  if (t_f.empty()) throw_config("EmptyGrid", "t_f grid is empty");
  for (std::size_t i = 1; i < t_f.size(); ++i)
    if (!(t_f[i] > t_f[i - 1])) throw_config("UnsortedGrid", "t_f grid must be strictly ascending");
  SweepResult s;
  s.t_f = t_f;
  s.infidelity.assign(t_f.size(), 0.0);
  const bool open = t2 && *t2 > 0.0;
  for_each_index(exec, t_f.size(), [&](std::size_t i) {
    const double f = open ? evolve_lindblad(pulse, t_f[i], *t2, nullptr, opt).fidelity
                          : evolve_unitary(pulse, t_f[i], nullptr, opt).fidelity;
    s.infidelity[i] = 1.0 - f;
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < t_f.size(); ++i)
    if (s.infidelity[i] < s.infidelity[best]) best = i;
  s.t_opt = t_f[best];
  s.min_infidelity = s.infidelity[best];
  return s;
}

std::vector<MapEntry> infidelity_map(const ParametricModel& model, const std::vector<std::pair<double, double>>& ab,
                                     int m, double lambda0, double lambda1, const std::vector<double>& t_f,
                                     std::optional<double> t2, int n_samples, Exec exec) {
  std::vector<MapEntry> out(ab.size());
  for_each_index(exec, ab.size(), [&](std::size_t i) {
    const auto [a, b] = ab[i];
    const PulseProfile p = synthesize_pulse(model, a, b, m, lambda0, lambda1, n_samples);
    const SweepResult s = sweep_tf(p, t_f, t2, Exec::Serial);
    out[i] = {a, b, s.min_infidelity, s.t_opt};
  });
  return out;
}

}  // namespace hgeo
