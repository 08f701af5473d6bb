#include <cmath>

#include "doctest.h"
#include "efk/error.hpp"
#include "efk/saddle.hpp"

using namespace efk;

TEST_CASE("saddle requires a supercritical quadrant") {
  // λ₁ = 2(π/2)² on (0,2)² exceeds one for every β ≥ 0.
  CHECK_THROWS_AS(build_saddle(2.0, 4.0, 16), Error);
  CHECK_THROWS_AS(build_saddle(20.0, 4.0, 4), Error);
}

TEST_CASE("small saddle has the sign of xy") {
  const SaddleResult s = build_saddle(20.0, 4.0, 32);
  CHECK(s.solve.run.converged);
  CHECK(s.sign_ok);
  CHECK(s.min_sign_product >= -1e-7);
  CHECK(s.covered);
  CHECK(s.window == doctest::Approx(12.0));
  CHECK(s.tile.nx == 2 * (2 * 32 + 2) + 1);
  CHECK(s.tile.x0 == doctest::Approx(-20.0));
  // Odd in each variable by construction.
  const int c = s.tile.nx / 2;
  CHECK(s.tile.at(c + 5, c + 7) == doctest::Approx(-s.tile.at(c - 5, c + 7)));
  CHECK(s.tile.at(c + 5, c + 7) == doctest::Approx(s.tile.at(c - 5, c - 7)));
  CHECK(s.tile.at(c, c + 3) == 0.0);
  CHECK(s.diagonal_defect < 1e-6);
}

TEST_CASE("reflection smoothness detects the wrong parity") {
  const auto q = DomainSpec::quadrant_square(10.0);
  const SpectralField zero(q, {24, 24});
  const ReflectionReport z = reflection_smoothness(zero);
  CHECK(z.smooth);
  for (double j : z.jumps) CHECK(j == 0.0);

  const SpectralField u = SpectralField::basis(q, {24, 24}, {1, 1}, 3.0);
  const ReflectionReport odd = reflection_smoothness(u, true);
  CHECK(odd.smooth);
  CHECK(odd.laplacian_trace < 1e-10);
  const ReflectionReport even = reflection_smoothness(u, false);
  CHECK_FALSE(even.smooth);
  CHECK(even.jumps[1] > even.threshold);
}

TEST_CASE("growth check") {
  const SpectralField a = SpectralField::basis(DomainSpec::quadrant_square(20.0), {16, 16}, {1, 1});
  const GrowthReport same = saddle_growth_check({a, a, 2.0 * a});
  REQUIRE(same.diffs.size() == 2);
  CHECK(same.diffs[0] == 0.0);
  CHECK(same.diffs[1] > 0.0);
  CHECK_FALSE(same.decreasing);
  CHECK_THROWS_AS(saddle_growth_check({a}), Error);
}
