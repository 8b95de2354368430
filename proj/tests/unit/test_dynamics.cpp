#include <algorithm>

#include "helpers.hpp"
#include "hgeo/dynamics.hpp"

using namespace hgeo;
using testing::error_name;

namespace {

PulseProfile fquad(double np = 2.0, int samples = 1024) {
  return synthesize_pulse(testing::lz(), np, np, 0, -10, 10, samples);
}

}  // namespace

TEST_CASE("sudden limit is the boundary ground-state overlap") {
  const auto r = evolve_unitary(fquad(), 0.0);
  CHECK(r.fidelity == doctest::Approx(1.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("frozen pulse keeps its eigenstate") {
  const auto m = testing::lz();
  const auto p = sampled_pulse(m, std::vector<double>(64, 0.7), 0);
  for (double tf : {0.5, 3.0, 20.0}) {
    CHECK(evolve_unitary(p, tf).fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(evolve_lindblad(p, tf, 5.0).fidelity < 1.0);
  }
}

TEST_CASE("norm and trace conservation") {
  const auto p = fquad();
  for (double tf : {0.7, 4.0, 15.0}) {
    const auto u = evolve_unitary(p, tf);
    CHECK(std::abs(u.state.norm() - 1.0) < 1e-8);
    CHECK(u.fidelity >= 0.0);
    CHECK(u.fidelity <= 1.0);
    const auto l = evolve_lindblad(p, tf, 3.0);
    CHECK(std::abs(l.rho.trace().real() - 1.0) < 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> es(l.rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK((l.rho - l.rho.adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("dephasing-free limit matches unitary evolution") {
  const auto p = fquad(3.0);
  for (double tf : {1.0, 5.0, 9.0})
    CHECK(std::abs(evolve_lindblad(p, tf, 1e12).fidelity - evolve_unitary(p, tf).fidelity) < 1e-6);
}

TEST_CASE("fidelity is invariant under a global energy shift") {
  const auto p = fquad();
  const auto sh = shifted(p.model, [](double z) { return 3.0 + 0.4 * z; }, [](double) { return 0.4; });
  auto q = p;
  q.model = sh;
  for (double tf : {1.3, 6.0}) CHECK(std::abs(evolve_unitary(q, tf).fidelity - evolve_unitary(p, tf).fidelity) < 1e-9);
}

TEST_CASE("step refinement stability") {
  const auto p = fquad(3.0);
  EvolutionOptions fine;
  fine.tolerance = 1e-11;
  fine.min_steps = 1024;
  for (double tf : {2.0, 8.0}) {
    CHECK(std::abs(evolve_unitary(p, tf).fidelity - evolve_unitary(p, tf, nullptr, fine).fidelity) < 1e-7);
    CHECK(std::abs(evolve_lindblad(p, tf, 50.0).fidelity - evolve_lindblad(p, tf, 50.0, nullptr, fine).fidelity) <
          1e-7);
  }
}

TEST_CASE("pi-pulse stays below the dephasing bound") {
  const auto pi = pi_pulse(testing::lz(), 0, -10, 10, 256);
  for (double tf : linspace(0.2, 10.0, 50)) {
    const double bound = 0.5 * (1.0 + std::exp(-tf / 200.0));
    CHECK(evolve_lindblad(pi, tf, 100.0).fidelity <= bound + 1e-12);
  }
}

TEST_CASE("sweep over t_f") {
  const auto p = fquad();
  const auto one = sweep_tf(p, {4.0});
  CHECK(one.t_opt == 4.0);
  CHECK(one.min_infidelity == doctest::Approx(1.0 - evolve_unitary(p, 4.0).fidelity).epsilon(1e-14));

  const auto frozen = sampled_pulse(testing::lz(), std::vector<double>(64, 0.0), 0);
  const auto fs = sweep_tf(frozen, {1.0, 2.0, 3.0});
  const auto first = std::min_element(fs.infidelity.begin(), fs.infidelity.end()) - fs.infidelity.begin();
  CHECK(fs.t_opt == fs.t_f[first]);

  const auto grid = linspace(0.0, 10.0, 26);
  const auto deph = sweep_tf(p, grid, 100.0);
  CHECK(deph.t_opt > grid.front());
  CHECK(deph.t_opt < grid.back());
  const auto par = sweep_tf(p, grid, 100.0, Exec::Parallel);
  CHECK(par.infidelity == deph.infidelity);

  CHECK(error_name([&] { sweep_tf(p, {}); }) == "EmptyGrid");
  CHECK(error_name([&] { sweep_tf(p, {2.0, 1.0}); }) == "UnsortedGrid");
  CHECK(error_name([&] { evolve_unitary(p, -1.0); }) == "InvalidTime");
  CHECK(error_name([&] { evolve_lindblad(p, 1.0, 0.0); }) == "InvalidT2");
}

TEST_CASE("infidelity map depends on n_plus only") {
  const std::vector<std::pair<double, double>> ab = {{3, 1}, {2, 2}, {1, 3}, {0, 1}, {1, 0}};
  const auto map = infidelity_map(testing::lz(), ab, 0, -10, 10, linspace(0, 10, 21), 100.0, 1024, Exec::Parallel);
  REQUIRE(map.size() == 5);
  CHECK(std::abs(map[0].min_infidelity - map[1].min_infidelity) < 1e-8);
  CHECK(std::abs(map[2].min_infidelity - map[1].min_infidelity) < 1e-8);
  CHECK(std::abs(map[3].min_infidelity - map[4].min_infidelity) < 1e-8);
  CHECK(map[3].t_opt == map[4].t_opt);
}
