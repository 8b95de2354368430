#include "helpers.hpp"
#include "hgeo/adiabatic.hpp"
#include "hgeo/dynamics.hpp"

using namespace hgeo;
using testing::rel;

namespace {

PulseProfile member(double np, double z0 = 10.0) {
  const auto f = lz_family_member(np);
  return synthesize_pulse(testing::lz(), f.alpha, f.beta, 0, -z0, z0, 1024);
}

}  // namespace

TEST_CASE("frozen pulse has no adiabaticity") {
  const auto p = sampled_pulse(testing::lz(), std::vector<double>(64, 0.0), 0);
  const auto r = adiabatic_report(p);
  CHECK(r.a_tilde_0 == 0.0);
  CHECK(r.t_adiab == 0.0);
  CHECK(r.bound(3.0) == 0.0);
  CHECK(infidelity_bound(p, 3.0) == 0.0);
  // constant gap 2x: resonances at 2 pi k / 2
  const auto res = resonance_times(p, 1, 3);
  REQUIRE(res.size() == 3);
  for (int k = 1; k <= 3; ++k) CHECK(res[k - 1] == doctest::Approx(std::numbers::pi * k).epsilon(1e-10));
}

TEST_CASE("a~(0) against the closed form, and endpoint symmetry") {
  for (double np : {0.0, 1.0, 2.0, 3.0, 4.5}) {
    CAPTURE(np);
    const auto r = adiabatic_report(member(np));
    CHECK(rel(r.pairs[0].a0, lz_a_tilde_0_closed_form(np, 1.0, 10.0)) < 1e-6);
    CHECK(rel(r.pairs[0].a1, r.pairs[0].a0) < 1e-8);
  }
}

TEST_CASE("linear ramp averaged gap and first resonance") {
  const auto p = member(0.0);
  const double phi = std::sqrt(101.0) + std::asinh(10.0) / 10.0;
  CHECK(averaged_gap(p, 1, 0) == doctest::Approx(phi).epsilon(1e-10));
  CHECK(resonance_times(p, 1, 1).front() == doctest::Approx(2 * std::numbers::pi / phi).epsilon(1e-10));
  CHECK(resonance_times(p, 1, 1).front() == doctest::Approx(0.6071).epsilon(1e-4));
}

TEST_CASE("bound scaling") {
  const auto p = member(3.0);
  const double b = infidelity_bound(p, 10.0);
  CHECK(infidelity_bound(p, 10.0 * std::sqrt(2.0)) == doctest::Approx(b / 2).epsilon(1e-12));
  const auto r = adiabatic_report(p);
  CHECK(b == doctest::Approx(4 * r.a_tilde_0 * r.a_tilde_0 / 100.0).epsilon(1e-14));
  for (std::size_t k = 1; k < r.pairs[0].resonances.size(); ++k)
    CHECK(r.pairs[0].resonances[k] > r.pairs[0].resonances[k - 1]);
}

TEST_CASE("adiabatic time") {
  const double t3 = adiabatic_threshold(member(3.0));
  CHECK(t3 < adiabatic_threshold(member(2.0)));
  CHECK(t3 < adiabatic_threshold(member(4.0)));
  // the linear ramp peaks at the anticrossing, so t_adiab grows linearly with z0
  const double a = adiabatic_threshold(member(0.0, 40.0));
  const double b = adiabatic_threshold(member(0.0, 80.0));
  CHECK(b / a == doctest::Approx(2.0).epsilon(1e-2));  // max taken on the sample grid
}

TEST_CASE("simulated infidelity stays below the bound past t_adiab") {
  for (double np : {1.0, 2.0, 3.0, 5.0}) {
    CAPTURE(np);
    const auto p = member(np);
    const auto r = adiabatic_report(p);
    for (double tf : linspace(r.t_adiab, 2.0 * r.t_adiab, 4)) {
      CAPTURE(tf);
      CHECK(1.0 - evolve_unitary(p, tf).fidelity <= r.bound(tf));
    }
  }
}

TEST_CASE("linear ramp resonances sit at infidelity minima in the tail") {
  // the ramp is diabatic below t_f ~ 20; minima show up once t_f passes t_adiab ~ 500/x
  const auto p = member(0.0);
  const double t1 = resonance_times(p, 1, 1).front();
  for (int k : {500, 550, 600}) {
    const double t = k * t1;
    const auto grid = linspace(t - 0.25, t + 0.25, 101);
    const auto s = sweep_tf(p, grid);
    CAPTURE(k);
    CHECK(std::abs(s.t_opt - t) < 0.02);
  }
}
