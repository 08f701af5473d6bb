#include <cmath>

#include "doctest.h"
#include "efk/continuation.hpp"
#include "efk/minimize.hpp"
#include "efk/stability.hpp"

using namespace efk;

TEST_CASE("eigenvalues at u = 0 are lambda1^2 + beta*lambda1 - 1") {
  const auto d = DomainSpec::interval(2.0 * M_PI);
  const Field zero = SpectralField(d, {32});
  for (auto p : {LinearizedPotential::USquaredMinusOne, LinearizedPotential::ThreeUSquaredMinusOne}) {
    const EigenResult e = smallest_eigenpair(zero, 2.0, p);
    CHECK(e.converged);
    CHECK(e.value == doctest::Approx(1.0 / 16.0 + 0.5 - 1.0).epsilon(1e-9));
    CHECK(eigvec_positivity(e.vector));
  }
  const auto ball = DomainSpec::ball(5.0, 2);
  const double lam = lambda1_discrete(ball, 257);
  const EigenResult r = smallest_eigenpair(RadialField(ball, 257), 1.5, LinearizedPotential::USquaredMinusOne);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(lam * lam + 1.5 * lam - 1.0).epsilon(1e-8));
  CHECK(rayleigh_quotient(RadialField(ball, 257), 1.5, LinearizedPotential::USquaredMinusOne, r.vector) ==
        doctest::Approx(r.value).epsilon(1e-8));
}

TEST_CASE("branch points are stable with a zero first eigenvalue") {
  const auto d = DomainSpec::interval(2.0 * M_PI);
  const NewtonResult n = newton_solve(seed_branch(d, {64}, 0.3).field, 3.25);
  REQUIRE(n.converged);
  const StabilityReport s = stability(n.u, 3.25);
  CHECK(s.converged);
  CHECK(std::abs(s.mu1) < 1e-6);
  CHECK(s.nu1 > 0.0);
  CHECK(s.strictly_stable);
  CHECK(s.ordered);
  CHECK(eigvec_positivity(s.eigvec_mu));
  CHECK(eigvec_positivity(s.eigvec_nu));
  CHECK(s.min_u2v2 > 0.0);
}

TEST_CASE("radial positive solution") {
  MinimizeConfig c;
  c.beta = 3.0;
  c.n_points = 257;
  const MinimizeRun run = minimize(c, DomainSpec::ball(8.0, 2)).best;
  REQUIRE(run.converged);
  const StabilityReport s = stability(run.field, 3.0);
  CHECK(s.converged);
  CHECK(std::abs(s.mu1) < 1e-5);
  CHECK(s.nu1 > 0.0);
  CHECK(eigvec_positivity(s.eigvec_mu));
}
