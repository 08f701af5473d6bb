#include <cmath>

#include "doctest.h"
#include "efk/continuation.hpp"
#include "efk/error.hpp"
#include "efk/minimize.hpp"

using namespace efk;

namespace {

const DomainSpec kLine = DomainSpec::interval(2.0 * M_PI);

// a² = (1 − λ₁² − βλ₁) / ∫e₁⁴ with λ₁ = 1/4, β = 3.7, ∫e₁⁴ = 3/(2L).
constexpr double kAmplitudeSquared = 0.0523598775598297;

}  // namespace

TEST_CASE("bifurcation point and one-mode seed") {
  CHECK(bifurcation_point(kLine) == doctest::Approx(3.75).epsilon(1e-14));
  CHECK_THROWS_AS(bifurcation_point(DomainSpec::interval(2.0)), Error);
  const double a = one_mode_amplitude(kLine, 3.7);
  CHECK(a * a == doctest::Approx(kAmplitudeSquared).epsilon(1e-12));
  const BranchPoint seed = seed_branch(kLine, {64}, 0.05);
  CHECK(seed.beta == doctest::Approx(3.7));
  CHECK(seed.residual < 1e-9);
  CHECK(seed.field.coeffs()[0] > 0.0);
  // Newton only corrects the one-mode guess slightly this close to the bifurcation.
  CHECK(seed.field.coeffs()[0] == doctest::Approx(a).epsilon(0.05));
}

TEST_CASE("branch from the seed down to sqrt(8)") {
  const BranchPoint seed = seed_branch(kLine, {64}, 0.05);
  ContinuationConfig c;
  c.beta_stop = std::sqrt(8.0);
  const auto branch = continue_branch(c, seed);
  REQUIRE(branch.size() > 5);
  CHECK(branch.back().beta <= std::sqrt(8.0));
  for (std::size_t i = 0; i < branch.size(); ++i) {
    const auto& p = branch[i];
    CHECK(p.residual < 1e-8);
    if (p.beta < std::sqrt(8.0)) continue;
    CHECK(p.nu1 > 0.0);
    CHECK(fine_min(p.field) >= -1e-9);
    CHECK(p.sup_norm <= 1.0 + 1e-6);
    if (i > 0) {
      CHECK(p.sup_norm > branch[i - 1].sup_norm);
      CHECK(p.arclength > branch[i - 1].arclength);
    }
  }
}

TEST_CASE("branch endpoint and amplitude law") {
  const BranchPoint seed = seed_branch(kLine, {64}, 0.05);
  ContinuationConfig c;
  c.direction = Direction::IncreasingBeta;
  c.stop_at_sign_change = true;
  c.beta_stop = 4.5;
  c.compute_nu1 = false;
  const auto branch = continue_branch(c, seed);
  CHECK(std::abs(branch_endpoint(branch) - 3.75) < 1e-3);
  CHECK(std::isnan(branch_endpoint({seed})));
  const AmplitudeLaw law = amplitude_law(kLine, {64}, {0.2, 0.1, 0.05, 0.025});
  CHECK(law.slope == doctest::Approx(0.5).epsilon(0.1));
  CHECK(law.sup_norms.size() == 4);
}

TEST_CASE("branch interpolation and minimizer agreement") {
  const BranchPoint seed = seed_branch(kLine, {64}, 0.05);
  ContinuationConfig c;
  c.beta_stop = 3.0;
  c.compute_nu1 = false;
  const auto branch = continue_branch(c, seed);
  const NewtonResult n = branch_solution_at(branch, 3.2);
  REQUIRE(n.converged);
  MinimizeConfig m;
  m.beta = 3.2;
  m.modes = {64};
  const MinimizeRun run = minimize(m, kLine).best;
  CHECK((std::get<SpectralField>(run.field) - n.u).l2_norm() < 1e-6);
  CHECK(tobias_form(n.u, n.u, 3.2) == 0.0);
  const UniquenessReport u = verify_uniqueness_segment(kLine, branch, {3.0, 3.74}, 3);
  CHECK(u.all_agree);
  CHECK_THROWS_AS(verify_uniqueness_segment(kLine, {}, {3.0}), Error);
}
