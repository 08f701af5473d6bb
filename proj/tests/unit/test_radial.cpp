#include <cmath>
#include <random>

#include "doctest.h"
#include "efk/error.hpp"
#include "efk/minimize.hpp"
#include "efk/radial.hpp"

using namespace efk;

namespace {

constexpr double kJ01 = 2.4048255576957724;

RadialField smooth_random(const DomainSpec& d, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng);
  const double r0 = d.inner_radius, r1 = d.radius;
  return RadialField::sample(d, n, [&](double r) {
    const double s = (r - r0) / (r1 - r0);
    return std::sin(M_PI * s) * (a + b * std::cos(2.0 * M_PI * s) + c * s * s);
  });
}

double weighted_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_CASE("radial gradient matches central differences") {
  for (const auto& d : {DomainSpec::ball(6.0, 2), DomainSpec::ball(5.0, 3), DomainSpec::annulus(2.0, 7.0, 2)}) {
    for (auto kind : {NonlinearityKind::Cubic, NonlinearityKind::TruncatedPos}) {
      const RadialField u = smooth_random(d, 129, 1);
      const RadialField dir = smooth_random(d, 129, 2);
      const double beta = 2.5;
      const double eps = 1e-5;
      const double fd =
          (radial_energy(u + eps * dir, beta, kind).j_beta - radial_energy(u - eps * dir, beta, kind).j_beta) /
          (2.0 * eps);
      const double exact = weighted_dot(radial_gradient(u, beta, kind).values(), dir.values());
      CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("radial linearized operator is self-adjoint in the weighted product") {
  const auto d = DomainSpec::ball(4.0, 2);
  const RadialField u = smooth_random(d, 129, 3);
  const RadialField v = smooth_random(d, 129, 4);
  const RadialField w = smooth_random(d, 129, 5);
  const double a = radial_apply_linearized(u, 2.0, v, LinearizedPotential::ThreeUSquaredMinusOne).dot(w);
  const double b = radial_apply_linearized(u, 2.0, w, LinearizedPotential::ThreeUSquaredMinusOne).dot(v);
  CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
}

TEST_CASE("origin stencil") {
  for (int dim : {2, 3}) {
    const auto d = DomainSpec::ball(1.0, dim);
    RadialGrid g(d, 65);
    std::vector<double> u(65);
    for (int i = 0; i < 65; ++i) u[i] = g.r()[i] * g.r()[i];
    const auto lap = g.laplacian(u);
    CHECK(lap[0] == doctest::Approx(2.0 * dim).epsilon(1e-12));
    CHECK(lap[30] == doctest::Approx(2.0 * dim).epsilon(1e-3));
  }
}

TEST_CASE("second-order convergence") {
  const double radius = 3.0;
  const auto d = DomainSpec::ball(radius, 2);
  const double exact = std::pow(kJ01 / radius, 2);
  std::vector<double> err, energies;
  for (int n : {129, 257, 513}) {
    err.push_back(std::abs(lambda1_discrete(d, n) - exact));
    const RadialField u = RadialField::sample(d, n, [&](double r) { return 0.8 * bessel_j(0.0, kJ01 * r / radius); });
    energies.push_back(radial_energy(u, 2.0).j_beta);
  }
  const double p_lambda = std::log2(err[0] / err[1]);
  const double p_lambda2 = std::log2(err[1] / err[2]);
  CHECK(p_lambda == doctest::Approx(2.0).epsilon(0.1));
  CHECK(p_lambda2 == doctest::Approx(2.0).epsilon(0.1));
  const double p_energy = std::log2((energies[0] - energies[1]) / (energies[1] - energies[2]));
  CHECK(p_energy == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("principal eigenvector is positive and normalized") {
  const RadialField phi = phi1_discrete(DomainSpec::annulus(1.0, 3.0, 3), 257);
  CHECK(phi.l2_norm() == doctest::Approx(1.0));
  for (int i = 1; i < 256; ++i) CHECK(phi.values()[i] > 0.0);
  CHECK(monotonicity_profile(phi).sign_changes == 1);
}

TEST_CASE("flip transform") {
  const auto ball = DomainSpec::ball(8.0, 2);
  // u(0) < 0 < max: the profile is flipped about its interior maximum.
  const RadialField u = RadialField::sample(ball, 257, [](double r) { return 0.8 * std::sin(M_PI * r / 8.0 - 0.6); });
  const FlipResult f = flip_transform(u);
  REQUIRE(f.applied);
  CHECK(f.level == doctest::Approx(u.sup_norm()).epsilon(1e-3));
  CHECK(f.factor == doctest::Approx((1.0 - f.level) / (1.0 + f.level)));
  for (int i = 0; i < 256; ++i) CHECK(f.field.values()[i] >= -1e-14);
  for (double beta : {1.0, 3.0, 6.0}) CHECK(radial_energy(f.field, beta).j_beta < radial_energy(u, beta).j_beta);

  const auto ann = DomainSpec::annulus(2.0, 6.0, 2);
  const RadialField s = RadialField::sample(ann, 257, [](double r) { return 0.9 * std::sin(M_PI * (r - 2.0) / 2.0); });
  const FlipResult g = flip_transform(s);
  REQUIRE(g.applied);
  CHECK(g.eta < g.mu);
  CHECK(radial_energy(g.field, 4.0).j_beta < radial_energy(s, 4.0).j_beta);
  CHECK(monotonicity_profile(g.field).sign_definite);

  const RadialField pos = RadialField::sample(ball, 257, [](double r) { return std::cos(M_PI * r / 16.0); });
  CHECK_FALSE(flip_transform(pos).applied);
}

TEST_CASE("monotonicity profile") {
  const auto ann = DomainSpec::annulus(1.0, 2.0, 2);
  const RadialField s = RadialField::sample(ann, 257, [](double r) { return std::sin(2.0 * M_PI * (r - 1.0)); });
  const MonotonicityProfile p = monotonicity_profile(s);
  CHECK(p.sign_changes == 2);
  CHECK_FALSE(p.sign_definite);
  const RadialField z(ann, 65);
  CHECK(monotonicity_profile(z).sign_changes == 0);
  const std::vector<double> d{1.0, 1e-12, -1e-12, 1.0, -2.0};
  CHECK(count_sign_changes(d, 1e-7) == 1);
}

TEST_CASE("second-order splitting consistency") {
  MinimizeConfig c;
  c.beta = 3.0;
  c.n_points = 257;
  const MinimizeRun run = minimize(c, DomainSpec::ball(8.0, 2)).best;
  REQUIRE(run.converged);
  const RadialSystemState s = radial_system_state(std::get<RadialField>(run.field), 3.0);
  CHECK(s.consistency < 1e-6);
  CHECK(w_field_check(run.field, 3.0).holds);
}

TEST_CASE("radial errors") {
  CHECK_THROWS_AS(RadialGrid(DomainSpec::ball(1.0, 2), 4), Error);
  CHECK_THROWS_AS(radial_energy(RadialField(DomainSpec::ball(1.0, 2), 32), 1.0), Error);
  const RadialField a(DomainSpec::ball(1.0, 2), 65);
  const RadialField b(DomainSpec::ball(1.0, 2), 129);
  CHECK_THROWS_AS(a + b, Error);
}
