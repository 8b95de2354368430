#include <random>

#include "helpers.hpp"
#include "hgeo/hypergeometry.hpp"
#include "hgeo/synthesis.hpp"

using namespace hgeo;
using testing::error_name;
using testing::rel;

TEST_CASE("qubit hypermetric closed form") {
  const auto q = build_model("qubit_sphere");
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> a(-3.0, 5.0), b(-1.5, 6.0), th(0.05, 3.09);
  for (int i = 0; i < 50; ++i) {
    const double al = a(rng), be = b(rng), t = th(rng);
    const Params p{t, 0.4};
    const auto s = spectrum(q, p);
    CHECK(rel(hypermetric(q, s, p, al, be, 0, 0), 1.0 / std::pow(2.0, al)) < 1e-10);
    CHECK(rel(hypermetric(q, s, p, al, be, 0, 1), std::pow(std::sin(t), be) / std::pow(2.0, al)) < 1e-10);
  }
  const Params p{0.9, 1.1};
  const auto t22 = hypergeo_tensor(q, p, 2.0, 2.0, 0);
  CHECK(t22.metric(0, 0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(t22.metric(1, 1) == doctest::Approx(std::pow(std::sin(0.9), 2) / 4).epsilon(1e-13));
  CHECK(std::abs(t22.metric(0, 1)) < 1e-14);
  CHECK(std::abs(t22.metric(0, 1) - t22.metric(1, 0)) < 1e-15);
}

TEST_CASE("landau-zener and rescaled metrics") {
  const auto m = testing::lz(1.3);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> z(-10, 10), a(-5, 5);
  for (int i = 0; i < 50; ++i) {
    const double zz = z(rng), al = a(rng), be = a(rng);
    CHECK(rel(hypermetric(m, zz, al, be, 0), lz_metric_closed_form(al, be, 1.3, zz)) < 1e-10);
  }
  const auto r = build_model("rescaled_lz", {{"x", 1.0}});
  for (double t : {0.2, 1.0, 2.0, 2.9})
    for (auto [al, be] : {std::pair{2.0, 2.0}, {4.0, 1.0}, {-1.0, 0.5}}) {
      const double expect = std::pow(std::abs(std::cos(t)), al - be) / std::pow(2.0, al);
      CHECK(rel(hypermetric(r, t, al, be, 0), expect) < 1e-10);
    }
}

TEST_CASE("hyper-berry curvature") {
  const auto q = build_model("qubit_sphere");
  const auto b = hyper_berry(q, Params{std::numbers::pi / 2, 0.3}, 2.0, 2.0, 0);
  CHECK(std::abs(b(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(hyper_berry(q, Params{1e-9, 0.3}, 2.0, 2.0, 0)(0, 1)) < 1e-8);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> th(0.1, 3.0), a(-2, 4);
  for (int i = 0; i < 20; ++i) {
    const double be = 2.0 * (1 + i % 3);
    const auto bb = hyper_berry(q, Params{th(rng), 1.0}, a(rng), be, 0);
    CHECK(std::abs(bb(0, 1) + bb(1, 0)) < 1e-14);
    CHECK(std::abs(bb(0, 0)) < 1e-14);
  }
  CHECK(error_name([&] { hyper_berry(q, Params{1.0, 0.0}, 2.0, 3.0, 0); }) == "OddBetaMultiParam");
}

TEST_CASE("sphere lengths, volume and speed-limit ratio") {
  CHECK(sphere_volume(2, 2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(qsl_ratio(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qsl_ratio(0, 0) == doctest::Approx(1.0 / (2 * std::numbers::pi)).epsilon(1e-12));
  CHECK(sphere_length_theta(2) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  CHECK(sphere_length_phi(2, 2, std::numbers::pi / 2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  for (auto [al, be] : {std::pair{2.0, 2.0}, {0.0, 0.0}, {3.0, -0.9}, {-1.0, 5.0}, {1.0, -0.99}})
    CHECK(rel(sphere_volume_numeric(al, be), sphere_volume(al, be)) < 1e-6);
  CHECK(error_name([] { sphere_volume(2, -2); }) == "BetaOutOfDomain");
}

TEST_CASE("curvature invariants") {
  for (double t : {0.3, 1.0, 1.57, 2.5}) CHECK(ricci_numeric(2, 2, t) == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(std::abs(chern_like(2, 2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sphere_volume(2, 2) >= std::numbers::pi * std::abs(chern_like(2, 2)));
  for (auto [al, be] : {std::pair{1.0, 1.0}, {3.0, 4.0}, {0.0, 5.0}})
    CHECK(sphere_volume(al, be) >= std::numbers::pi * std::abs(chern_like(al, be)) - 1e-12);
  const auto ci = curvature_invariants(3.0, 4.0, 0.8);
  CHECK(ci.kretschmann == doctest::Approx(ci.ricci_printed * ci.ricci_printed).epsilon(1e-14));
  CHECK(euler_characteristic(2, 2) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(euler_characteristic(2, 4)) < 1e-6);
  CHECK(error_name([] { curvature_invariants(2, 2, 0.0); }) == "PoleSingularity");
}

TEST_CASE("embedding") {
  const auto grid = linspace(0.01, std::numbers::pi - 0.01, 101);
  const auto pts = embedding(2, 2, grid);
  for (const auto& s : pts) CHECK(s.x * s.x + s.y * s.y + s.z * s.z == doctest::Approx(0.25).epsilon(1e-8));
  const auto eq = embedding(2, 2, {std::numbers::pi / 2}, 4);
  CHECK(eq.front().x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(eq.front().y) < 1e-14);
  CHECK(std::abs(eq.front().z) < 1e-12);

  const auto win = embedding_windows(6);
  REQUIRE_FALSE(win.empty());
  for (const auto& [a, b] : win) {
    CHECK(a < b);
    CHECK(embedding_validity(6, 0.5 * (a + b)) > 0.0);
  }
  CHECK(error_name([&] { embedding(2, 6, grid); }) == "EmbeddingUndefined");
}

TEST_CASE("shift symmetry and conformal covariance") {
  const auto m = build_model("lambda_system", {{"tau0", 1.0}, {"tau1", 3.0}, {"tau2", 0.5}});
  const auto sh = shifted(m, [](double l) { return 0.3 * l * l; }, [](double l) { return 0.6 * l; });
  const double om = 2.7;
  const auto sc = scaled(m, om);
  for (double l : {-4.0, -1.0, 0.5, 3.0})
    for (auto [al, be] : {std::pair{2.0, 2.0}, {3.0, 1.0}, {-1.0, 2.5}})
      for (int lvl = 0; lvl < 3; ++lvl) {
        const double g = hypermetric(m, l, al, be, lvl);
        CHECK(rel(hypermetric(sh, l, al, be, lvl), g) < 1e-10);
        CHECK(rel(hypermetric(sc, l, al, be, lvl), std::pow(om, be - al) * g) < 1e-10);
      }
}

TEST_CASE("n_plus degeneracy of the landau-zener metric") {
  const double x = 0.7;
  const auto m = testing::lz(x);
  for (double z : {-5.0, 0.0, 1.5, 8.0}) {
    const double a = hypermetric(m, z, 4.0, 0.0, 0) * 16.0;
    const double b = hypermetric(m, z, 2.0, 2.0, 0) * 4.0 / (x * x);
    const double c = hypermetric(m, z, 0.0, 4.0, 0) / std::pow(x, 4);
    CHECK(rel(b, a) < 1e-12);
    CHECK(rel(c, a) < 1e-12);
  }
}

TEST_CASE("direct sum of blocks") {
  const auto a = testing::lz(1.0);
  const auto b = shifted(testing::lz(2.0), [](double) { return 50.0; }, [](double) { return 0.0; });
  const auto s = direct_sum(a, b);
  for (double z : {-3.0, 0.0, 2.0}) {
    CHECK(rel(hypermetric(s, z, 2.0, 2.0, 0), hypermetric(a, z, 2.0, 2.0, 0)) < 1e-12);
    CHECK(rel(hypermetric(s, z, 3.0, 1.0, 2), hypermetric(b, z, 3.0, 1.0, 0)) < 1e-12);
  }
}
