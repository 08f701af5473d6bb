#pragma once

#include <cstdint>
#include <vector>

#include "efk/spectral.hpp"

namespace efk {

struct BranchPoint {
  double beta = 0.0;
  SpectralField field;
  double sup_norm = 0.0;
  double l2_norm = 0.0;
  double nu1 = 0.0;
  double arclength = 0.0;
  double residual = 0.0;
  int newton_iterations = 0;
};

enum class Direction { DecreasingBeta, IncreasingBeta };

struct ContinuationConfig {
  double ds = 0.02;
  double ds_min = 1e-4;
  double ds_max = 0.1;
  int max_steps = 400;
  double newton_tol = 1e-9;
  int max_newton = 12;
  Direction direction = Direction::DecreasingBeta;
  double beta_stop = -1e300;   // stop once β passes this value (either direction)
  bool stop_at_sign_change = false;  // stop after the φ₁ coefficient changes sign
  bool compute_nu1 = true;
};

// β̄ = (1 − λ₁²)/λ₁ of the domain; throws when λ₁ ≥ 1.
double bifurcation_point(const DomainSpec& domain);

// One-mode amplitude a² = (1 − λ₁² − βλ₁) / ∫e₁⁴ at β = β̄ − ε.
double one_mode_amplitude(const DomainSpec& domain, double beta);

struct NewtonResult {
  SpectralField u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Newton iteration for the cubic gradient at fixed β.
NewtonResult newton_solve(const SpectralField& u0, double beta, double tol = 1e-9, int max_iters = 30);

// Positive branch point at β̄ − ε from the one-mode seed; halves ε on Newton failure.
BranchPoint seed_branch(const DomainSpec& domain, const std::vector<int>& modes, double epsilon,
                        double newton_tol = 1e-9, bool compute_nu1 = true);

std::vector<BranchPoint> continue_branch(const ContinuationConfig& config, const BranchPoint& seed);

// β at which the branch meets u = 0, by a least-squares fit of β against the φ₁
// coefficient around its sign change. NaN when no sign change was recorded.
double branch_endpoint(const std::vector<BranchPoint>& branch);

struct AmplitudeLaw {
  std::vector<double> epsilons;
  std::vector<double> sup_norms;
  double slope = 0.0;
  double prefactor = 0.0;  // c in ‖u‖∞ ≈ c ε^slope
};

AmplitudeLaw amplitude_law(const DomainSpec& domain, const std::vector<int>& modes,
                           const std::vector<double>& epsilons);

// Branch solution at exactly β, corrected from the nearest recorded point.
NewtonResult branch_solution_at(const std::vector<BranchPoint>& branch, double beta, double tol = 1e-9);

struct UniquenessEntry {
  double beta = 0.0;
  double max_distance = 0.0;  // max L² distance between converged minimizers and the branch
  int converged_starts = 0;
  bool agree = false;
  bool trivial = false;       // β ≥ β̄: branch replaced by u = 0
};

struct UniquenessReport {
  std::vector<UniquenessEntry> entries;
  bool all_agree = false;
};

UniquenessReport verify_uniqueness_segment(const DomainSpec& domain, const std::vector<BranchPoint>& branch,
                                           const std::vector<double>& betas, int starts = 5,
                                           std::uint64_t seed = 11, double tol = 1e-5);

// Quadratic form Q(w) = ∫|Δw|² + β|∇w|² + (u²−1)w² for w = u − v.
double tobias_form(const SpectralField& u, const SpectralField& v, double beta);

}  // namespace efk
