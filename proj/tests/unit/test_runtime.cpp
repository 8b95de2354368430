#include "helpers.hpp"
#include "hgeo/runtime.hpp"

using namespace hgeo;
using testing::error_name;

TEST_CASE("timing statistics") {
  int calls = 0;
  const auto s = time_call([&] { ++calls; }, 2, 7);
  CHECK(calls == 9);
  CHECK(s.samples.size() == 7);
  CHECK(s.q1 <= s.median);
  CHECK(s.median <= s.q3);
  CHECK(s.iqr() >= 0.0);

  CHECK(error_name([] { time_call([] {}, 1, 4); }) == "InvalidValue");
  CHECK(error_name([] { time_call([] {}, 0, 5); }) == "InvalidValue");
}

TEST_CASE("runtime scans") {
  const auto ab = bench_alpha_beta({{1.0, 1.0}, {2.0, 2.0}}, 1, 5, 256);
  REQUIRE(ab.size() == 2);
  CHECK(ab[0].scan == "alpha_beta");
  CHECK(ab[1].x == 2.0);
  CHECK(ab[1].stats.median > 0.0);

  const auto ac = bench_anticrossings({1, 2, 3}, 1, 5, 0.2, 256);
  REQUIRE(ac.size() == 3);
  CHECK(ac[2].x == 3.0);
  const auto fit = runtime_fit(ac);
  CHECK(std::isfinite(fit.slope));
}
