#include <cmath>

#include "doctest.h"
#include "efk/error.hpp"
#include "efk/minimize.hpp"

using namespace efk;

TEST_CASE("trivial regime converges to zero") {
  MinimizeConfig c;
  c.beta = 4.0;
  c.modes = {32};
  c.init.kind = InitKind::Random;
  c.init.amplitude = 2.0;
  c.multistart = 3;
  const MinimizeResult r = minimize(c, DomainSpec::interval(2.0 * M_PI));
  REQUIRE(r.runs.size() == 3);
  for (const auto& run : r.runs) {
    CHECK(run.converged);
    CHECK(fine_sup_norm(run.field) < 1e-6);
    CHECK(std::abs(run.report.j_beta) < 1e-10);
  }
  CHECK(r.spread < 1e-6);
  c.init.kind = InitKind::Zero;
  CHECK(sup_norm(minimize(c, DomainSpec::interval(2.0 * M_PI)).best.field) == 0.0);
}

TEST_CASE("positive solution with -Lu + (beta/2)u > 0") {
  MinimizeConfig c;
  c.beta = 2.0;
  c.modes = {32, 32};
  const TruncatedReport t = minimize_truncated_positive(c, DomainSpec::square(20.0));
  CHECK(t.run.converged);
  CHECK(t.lower_ok);
  CHECK(t.upper_m_ok);
  CHECK_FALSE(t.checks_one);
  CHECK(t.cubic_solution);
  CHECK_FALSE(t.defect);
  const WFieldCheck w = w_field_check(t.run.field, 2.0);
  CHECK(w.holds);
  CHECK(w.min_u > 0.0);
}

TEST_CASE("fixed seeds reproduce runs exactly") {
  MinimizeConfig c;
  c.beta = 3.0;
  c.modes = {24, 24};
  c.init.kind = InitKind::Random;
  c.init.seed = 42;
  c.init.positive = true;
  const MinimizeRun a = minimize(c, DomainSpec::square(15.0)).best;
  const MinimizeRun b = minimize(c, DomainSpec::square(15.0)).best;
  CHECK(std::get<SpectralField>(a.field).coeffs() == std::get<SpectralField>(b.field).coeffs());
  CHECK(a.iterations == b.iterations);
  CHECK(a.energy_monotone);
  MinimizeConfig other = c;
  other.init.seed = 43;
  CHECK(std::get<SpectralField>(initial_field(other, DomainSpec::square(15.0))).coeffs() !=
        std::get<SpectralField>(initial_field(c, DomainSpec::square(15.0))).coeffs());
}

TEST_CASE("radial minimizer on a ball") {
  MinimizeConfig c;
  c.beta = 4.0;
  c.n_points = 257;
  const MinimizeRun run = minimize(c, DomainSpec::ball(10.0, 2)).best;
  CHECK(run.converged);
  const auto& u = std::get<RadialField>(run.field);
  CHECK(u.values()[0] > 0.9);
  CHECK(fine_max(run.field) <= 1.0 + 1e-6);
  CHECK(monotonicity_profile(u).sign_changes == 0);
}

TEST_CASE("gamma functional") {
  MinimizeConfig c;
  c.modes = {48};
  const GammaSweep s = gamma_sweep(DomainSpec::interval(2.0 * M_PI), {1e-2, 1e-3, 0.0}, c);
  REQUIRE(s.points.size() == 3);
  REQUIRE(s.increments.size() == 2);
  CHECK(s.increments[1] < s.increments[0]);
  for (const auto& p : s.points) {
    CHECK(p.run.converged);
    CHECK(p.min_value >= -1e-9);
  }
  CHECK(s.points[0].rescale_residual < 1e-6);
  CHECK_THROWS_AS(gamma_sweep(DomainSpec::interval(2.0 * M_PI), {1e-3, 1e-2}, c), Error);
  CHECK_THROWS_AS(gamma_sweep(DomainSpec::interval(2.0), {1e-3}, c), Error);
}

TEST_CASE("minimize errors") {
  MinimizeConfig c;
  c.max_iters = 0;
  CHECK_THROWS_AS(minimize(c, DomainSpec::interval(7.0)), Error);
  MinimizeConfig g;
  g.gamma = 0.1;
  CHECK_THROWS_AS(minimize(g, DomainSpec::ball(5.0, 2)), Error);
  MinimizeConfig f;
  f.init.kind = InitKind::File;
  f.init.path = "/nonexistent/field.csv";
  CHECK_THROWS_AS(minimize(f, DomainSpec::interval(7.0)), Error);
}
