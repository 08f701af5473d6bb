#include <cmath>
#include <random>

#include "doctest.h"
#include "efk/error.hpp"
#include "efk/minimize.hpp"
#include "efk/spectral.hpp"

using namespace efk;

namespace {

// Symbolic integration of sin² and sin⁴ on (0, π), a = 0.1, β = 2.
constexpr double kEnergyOracle = 0.010011936620731894;
constexpr double kGradientOracle = 0.2004774648292757;

SpectralField random_field(const DomainSpec& d, const std::vector<int>& modes, unsigned seed, double amp) {
  SpectralField u(d, modes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto lam = u.eigenvalues();
  for (std::size_t i = 0; i < u.size(); ++i) u.coeffs()[i] = amp * n(rng) / (1.0 + lam[i]);
  return u;
}

double directional_fd(const SpectralField& u, const SpectralField& d, double beta, NonlinearityKind k) {
  const double eps = 1e-5;
  SpectralField up = u + eps * d;
  SpectralField um = u - eps * d;
  return (energy(up, beta, k).j_beta - energy(um, beta, k).j_beta) / (2.0 * eps);
}

}  // namespace

TEST_CASE("single-mode energy oracle") {
  const auto d = DomainSpec::interval(M_PI);
  const auto u = SpectralField::basis(d, {8}, {1}, 0.1);
  const EnergyReport e = energy(u, 2.0, NonlinearityKind::Cubic);
  CHECK(e.j_beta == doctest::Approx(kEnergyOracle).epsilon(1e-12));
  CHECK(e.j_beta_shifted == doctest::Approx(kEnergyOracle + M_PI / 4.0).epsilon(1e-12));
  const SpectralField g = gradient(u, 2.0, NonlinearityKind::Cubic);
  CHECK(g.coeffs()[0] == doctest::Approx(kGradientOracle).epsilon(1e-12));
  CHECK(std::abs(g.coeffs()[1]) < 1e-14);  // sin³ only excites odd modes
  CHECK(std::abs(g.coeffs()[2]) > 1e-6);
}

TEST_CASE("gradient matches central differences") {
  for (const auto& [dom, modes] : {std::pair{DomainSpec::interval(7.0), std::vector<int>{24}},
                                   std::pair{DomainSpec::hyperrectangle({6.0, 9.0}), std::vector<int>{12, 16}}}) {
    for (auto kind : {NonlinearityKind::Cubic, NonlinearityKind::TruncatedSym, NonlinearityKind::TruncatedPos}) {
      const SpectralField u = random_field(dom, modes, 3, 2.0);
      const SpectralField d = random_field(dom, modes, 4, 1.0);
      const double beta = 2.0;
      const double exact = gradient(u, beta, kind).dot(d);
      const double fd = directional_fd(u, d, beta, kind);
      CHECK(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("Parseval and analysis adjoint") {
  const auto d = DomainSpec::hyperrectangle({3.0, 5.0});
  const SpectralField u = random_field(d, {10, 14}, 5, 1.0);
  const SineBasis b(d, {10, 14});
  const auto grid = u.padded_values();
  double quad = 0.0;
  for (double v : grid) quad += v * v;
  quad *= b.quadrature_weight();
  CHECK(std::abs(quad - u.l2_norm() * u.l2_norm()) <= 1e-10 * quad);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> g(b.padded_size());
  for (double& x : g) x = n(rng);
  std::vector<double> c(b.size());
  b.analyze(g, c);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) lhs += grid[i] * g[i];
  lhs *= b.quadrature_weight();
  for (std::size_t i = 0; i < c.size(); ++i) rhs += u.coeffs()[i] * c[i];
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
}

TEST_CASE("linearized operator is symmetric") {
  const auto d = DomainSpec::square(8.0);
  const SpectralField u = random_field(d, {12, 12}, 1, 1.5);
  const SpectralField v = random_field(d, {12, 12}, 2, 1.0);
  const SpectralField w = random_field(d, {12, 12}, 3, 1.0);
  for (auto p : {LinearizedPotential::USquaredMinusOne, LinearizedPotential::ThreeUSquaredMinusOne}) {
    const double a = apply_linearized(u, 3.0, v, p).dot(w);
    const double b = apply_linearized(u, 3.0, w, p).dot(v);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1.0));
  }
}

TEST_CASE("collocation round trip and point evaluation") {
  const auto d = DomainSpec::hyperrectangle({2.0, 3.0});
  const SpectralField u = random_field(d, {9, 7}, 8, 1.0);
  const auto v = u.collocation_values();
  const SpectralField back = SpectralField::from_collocation(d, {9, 7}, v);
  CHECK((back - u).l2_norm() < 1e-12);
  const std::array<double, 2> x{0.7, 1.3};
  const double direct = u.evaluate(x);
  double sum = 0.0;
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 7; ++j)
      sum += u.coeffs()[i * 7 + j] * (2.0 / std::sqrt(6.0)) * std::sin((i + 1) * M_PI * 0.7 / 2.0) *
             std::sin((j + 1) * M_PI * 1.3 / 3.0);
  CHECK(direct == doctest::Approx(sum).epsilon(1e-12));
  // ∂ₓ² e_k = −(kπ/L)² e_k
  const auto e = SpectralField::basis(DomainSpec::interval(2.0), {4}, {3});
  const std::array<double, 1> p{0.3};
  CHECK(e.evaluate(p, {2}) == doctest::Approx(-std::pow(3.0 * M_PI / 2.0, 2) * e.evaluate(p)));
}

TEST_CASE("refinement leaves the energy unchanged") {
  const auto d = DomainSpec::interval(5.0);
  const SpectralField u = random_field(d, {16}, 6, 2.0);
  const SpectralField fine = refine(u, {48});
  for (auto kind : {NonlinearityKind::Cubic}) {
    const double a = energy(u, 2.5, kind).j_beta;
    const double b = energy(fine, 2.5, kind).j_beta;
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(a));
  }
  CHECK((refine(fine, {16}) - u).l2_norm() < 1e-14);
}

TEST_CASE("domain rescaling") {
  const auto d = DomainSpec::interval(2.0);
  const SpectralField u = random_field(d, {8}, 2, 1.0);
  const SpectralField w = rescale_domain(u, 3.0);
  CHECK(w.domain().lengths[0] == doctest::Approx(6.0));
  const std::array<double, 1> x{1.7};
  const std::array<double, 1> y{1.7 / 3.0};
  CHECK(w.evaluate(x) == doctest::Approx(u.evaluate(y)).epsilon(1e-12));
}

TEST_CASE("spectral errors") {
  const auto d = DomainSpec::interval(1.0);
  CHECK_THROWS_AS(SpectralField(d, {0}), Error);
  CHECK_THROWS_AS(energy(SpectralField(d, {2}), 1.0, NonlinearityKind::Cubic), Error);
  CHECK_THROWS_AS(SpectralField(d, {4}) + SpectralField(d, {5}), Error);
}
