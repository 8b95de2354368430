#include <cmath>

#include "helpers.hpp"
#include "hgeo/basis.hpp"

using namespace hgeo;
using testing::error_name;

namespace {

std::vector<double> cubic_target(const std::vector<double>& tau) {
  std::vector<double> g(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double t = tau[i];
    g[i] = -10.0 + 100.0 * t - 240.0 * t * t + 160.0 * t * t * t;
  }
  return g;
}

double l1(const std::vector<double>& tau, const std::vector<double>& g) {
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) a[i] = std::abs(g[i]);
  return quad::trapezoid(tau, a);
}

std::vector<double> column(const BasisSet& b, int j) {
  return {b.members.col(j).data(), b.members.col(j).data() + b.members.rows()};
}

}  // namespace

TEST_CASE("gram of a single member") {
  const auto b = build_basis({2.0}, 1.0, 10.0, 512);
  CHECK(b.gram.rows() == 1);
  CHECK(b.gram(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  const auto p = prune(b);
  CHECK(p.kept.size() == 1);
  CHECK(svd_rank(b.gram) == 1);
}

TEST_CASE("identical members collapse to one") {
  const auto b = build_basis({2.0, 2.0}, 1.0, 10.0, 512);
  CHECK(b.gram(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(prune(b).kept.size() == 1);
}

TEST_CASE("pruning agrees with the singular value rank") {
  const auto b = build_basis(linspace(-5.0, 5.0, 21), 1.0, 10.0);
  const auto p = prune(b);
  CHECK(static_cast<int>(p.kept.size()) == svd_rank(b.gram, 1e-10));
  CHECK(p.condition < 1e12);

  std::size_t last = b.gram.rows() + 1;
  for (double th : {1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2}) {
    const auto q = prune(b, th);
    CHECK(q.kept.size() <= last);
    last = q.kept.size();
  }
}

TEST_CASE("member reproduction") {
  const auto b = prune(build_basis({1.0, 2.0, 3.0}, 1.0, 10.0));
  REQUIRE(b.kept.size() == 3);
  const auto e = expand(b, column(b, 1));
  CHECK(e.error < 1e-10);
  CHECK(e.coefficients(0) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(e.coefficients(1) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(e.coefficients(2) == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("residual is orthogonal to the kept members") {
  const auto b = prune(build_basis(linspace(-2.0, 4.0, 7), 1.0, 10.0));
  std::vector<double> g(b.tau.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::sin(5.0 * b.tau[i]) + b.tau[i] * b.tau[i];
  const auto e = expand(b, g);
  CHECK(e.residual_overlap.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("nested ranges never increase the error") {
  const std::vector<double> all{1.0, 2.0, 3.0, 0.0, 4.0, -1.0, 5.0};
  std::vector<double> g(kBasisGrid);
  const auto tau = linspace(0.0, 1.0, kBasisGrid);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 8.0 * std::tanh(6.0 * (tau[i] - 0.5)) + std::sin(9.0 * tau[i]);
  double last = INFINITY;
  for (std::size_t k = 1; k <= all.size(); ++k) {
    const auto b = prune(build_basis({all.begin(), all.begin() + static_cast<long>(k)}, 1.0, 10.0));
    const double e = expand(b, g).error;
    CHECK(e <= last * (1.0 + 1e-9));
    last = e;
  }
}

TEST_CASE("cubic target") {
  const auto b = prune(build_basis(linspace(-5.0, 5.0, 21), 1.0, 10.0));
  const auto g = cubic_target(b.tau);
  const auto e = expand(b, g);
  CHECK(e.error < 1e-3 * l1(b.tau, g));
}

TEST_CASE("split expansion") {
  const auto b = prune(build_basis({1.0, 2.0, 3.0}, 1.0, 10.0));
  // odd about tau = 1/2, like the basis itself
  std::vector<double> g(b.tau.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 10.0 * std::sin(std::numbers::pi * (b.tau[i] - 0.5));
  const double whole = expand(b, g).error;
  const double split = expand_split(b, g).error;
  CHECK(split <= whole * (1.0 + 1e-9));
  CHECK(expand_split(b, g, false).error <= split * (1.0 + 1e-9));

  SUBCASE("constant target with a constant member") {
    const auto tau = linspace(0.0, 1.0, 1024);
    Eigen::MatrixXd m(1024, 2);
    for (int i = 0; i < 1024; ++i) {
      m(i, 0) = 1.0;
      m(i, 1) = tau[static_cast<std::size_t>(i)] - 0.5;
    }
    const auto c = prune(basis_from_samples(tau, m, {"one", "ramp"}));
    const auto e = expand_split(c, std::vector<double>(1024, 3.0));
    CHECK(e.error < 1e-10);
    CHECK((e.coefficients - e.coefficients2).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(e.coefficients(0) == doctest::Approx(3.0).epsilon(1e-10));
  }
}

TEST_CASE("basis errors") {
  CHECK(error_name([] { build_basis({}, 1.0, 10.0); }) == "EmptyGrid");
  CHECK(error_name([] { basis_from_samples({0.0, 1.0}, Eigen::MatrixXd(2, 0), {}); }) == "EmptyBasis");
  CHECK(error_name([] { basis_from_samples({0.0, 1.0}, Eigen::MatrixXd::Zero(2, 1), {"zero"}); }) == "EmptyBasis");
  const auto b = build_basis({2.0}, 1.0, 10.0, 64);
  CHECK(error_name([&] { expand(b, std::vector<double>(64, 1.0)); }) == "EmptyBasis");
}
