#include <cmath>

#include "doctest.h"
#include "efk/domain.hpp"
#include "efk/error.hpp"
#include "efk/field.hpp"

using namespace efk;

// Reference values computed with scipy.special / mpmath and scipy.optimize.
namespace oracle {
constexpr double j01 = 2.4048255576957724;
constexpr double j11 = 3.8317059702075125;
constexpr double j_half = 3.141592653589793;
constexpr double j_three_halves = 4.493409457909064;
constexpr double j4 = 7.588342434503804;
constexpr double m_beta_16 = 1.263088879896628;
constexpr double k0 = 1.5820902434225241;
constexpr double r2 = 4.265610383048131;
constexpr double r3 = 5.572466659619411;
constexpr double r10 = 13.459983479948965;
constexpr double disk10_threshold = 3.348437895878819;
}  // namespace oracle

TEST_CASE("bessel zeros") {
  CHECK(bessel_first_zero(0.0) == doctest::Approx(oracle::j01).epsilon(1e-12));
  CHECK(bessel_first_zero(1.0) == doctest::Approx(oracle::j11).epsilon(1e-12));
  CHECK(bessel_first_zero(0.5) == doctest::Approx(oracle::j_half).epsilon(1e-12));
  CHECK(bessel_first_zero(1.5) == doctest::Approx(oracle::j_three_halves).epsilon(1e-12));
  CHECK(bessel_first_zero(4.0) == doctest::Approx(oracle::j4).epsilon(1e-12));
  CHECK(std::abs(bessel_j(0.0, oracle::j01)) < 1e-13);
  CHECK_THROWS_AS(bessel_first_zero(-1.0), Error);
}

TEST_CASE("beta constants") {
  CHECK(constant_k0() == doctest::Approx(oracle::k0).epsilon(1e-12));
  CHECK(constant_m_beta(1.6) == doctest::Approx(oracle::m_beta_16).epsilon(1e-10));
  CHECK(constant_c_beta(2.0) == doctest::Approx(std::sqrt(2.0)));
  // M_β ≤ C_β exactly from K₀ on.
  CHECK(constant_m_beta(oracle::k0) == doctest::Approx(constant_c_beta(oracle::k0)).epsilon(1e-10));
  CHECK(constant_m_beta(2.0) < constant_c_beta(2.0));
  CHECK(constant_m_beta(1.4) > constant_c_beta(1.4));
  const auto c = beta_constants(std::sqrt(8.0), 0.25);
  REQUIRE(c.beta_bar);
  CHECK(*c.beta_bar == doctest::Approx(3.75));
  CHECK_FALSE(beta_constants(1.0, 2.0).beta_bar);
}

TEST_CASE("critical radii and eigenvalues") {
  CHECK(critical_radius(std::sqrt(8.0), 2) == doctest::Approx(oracle::r2).epsilon(1e-10));
  CHECK(critical_radius(std::sqrt(8.0), 3) == doctest::Approx(oracle::r3).epsilon(1e-10));
  CHECK(critical_radius(std::sqrt(8.0), 10) == doctest::Approx(oracle::r10).epsilon(1e-10));
  const double lam = lambda1_analytic(DomainSpec::ball(oracle::r2, 2));
  CHECK(lam == doctest::Approx(std::sqrt(3.0) - std::sqrt(2.0)).epsilon(1e-10));
  CHECK(bifurcation_beta(lam) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-10));
  CHECK(bifurcation_beta(lambda1_analytic(DomainSpec::interval(2.0 * M_PI))) == doctest::Approx(3.75));
  const double l10 = lambda1_analytic(DomainSpec::ball(10.0, 2));
  CHECK(std::sqrt(12.0) - 2.0 * l10 == doctest::Approx(oracle::disk10_threshold).epsilon(1e-10));
  CHECK(lambda1_analytic(DomainSpec::square(20.0)) == doctest::Approx(2.0 * M_PI * M_PI / 400.0));
  CHECK_THROWS_AS(bifurcation_beta(1.5), Error);
  CHECK_THROWS_AS(lambda1_analytic(DomainSpec::annulus(1.0, 2.0, 2)), Error);
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(DomainSpec::interval(-1.0), Error);
  CHECK_THROWS_AS(DomainSpec::annulus(3.0, 2.0, 2), Error);
  CHECK_THROWS_AS(DomainSpec::ball(1.0, 0), Error);
  CHECK(DomainSpec::square(2.0).volume() == doctest::Approx(4.0));
  CHECK(DomainSpec::ball(1.0, 2).volume() == doctest::Approx(M_PI));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI));
}

TEST_CASE("bounds lemma") {
  const auto f = [](double s) { return s - s * s * s; };
  CHECK(bounds_lemma_check(3.0, 0.0, 0.99, f).holds);
  CHECK_FALSE(bounds_lemma_check(3.0, 0.0, 1.2, f).holds);
  // For β ≥ √8, g is nondecreasing on [0, 1] and maximal at 1.
  CHECK(interval_max([&](double s) { return scalar_g(std::sqrt(8.0), s, f); }, 0.0, 1.0).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(interval_max([](double s) { return scalar_h(1.6, s); }, 0.0, 3.0).value ==
        doctest::Approx(oracle::m_beta_16).epsilon(1e-9));
}

TEST_CASE("principal eigenpairs") {
  const Eigenpair disk = lambda1(DomainSpec::ball(2.0, 2));
  CHECK(disk.value == doctest::Approx(std::pow(oracle::j01 / 2.0, 2)));
  CHECK(l2_norm(disk.eigenfunction) == doctest::Approx(1.0).epsilon(1e-6));
  const Eigenpair ann = lambda1(DomainSpec::annulus(5.0, 15.0, 2), 513);
  // v = √r u turns the radial operator into −v'' − v/(4r²), so λ₁ sits just below (π/10)².
  CHECK(ann.value < std::pow(M_PI / 10.0, 2));
  CHECK(ann.value > std::pow(M_PI / 10.0, 2) - 1.0 / 100.0);
}
