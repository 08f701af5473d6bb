#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efk/field.hpp"
#include "efk/lbfgs.hpp"

namespace efk {

enum class InitKind { Zero, DeltaPhi1, Random, File };

struct InitSpec {
  InitKind kind = InitKind::DeltaPhi1;
  double delta = 0.0;        // δ for δφ₁; 0 selects 0.1·min(1, 1/√λ₁)
  std::uint64_t seed = 1;    // random inits
  double amplitude = 0.5;    // random inits
  bool positive = false;     // random inits: lean towards a positive profile
  std::string path;          // file inits
};

struct MinimizeConfig {
  double beta = 2.0;
  NonlinearityKind nonlinearity = NonlinearityKind::Cubic;
  InitSpec init;
  double grad_tol = 0.0;  // 0 selects 1e−9 (spectral) or 1e−8 (radial)
  int max_iters = 20000;
  int multistart = 1;     // random starts use seeds init.seed, init.seed + 1, ...
  std::optional<double> gamma;  // minimize the γ-functional (β fixed at 1) instead
  std::vector<int> modes;       // sine modes per axis; empty selects the defaults
  int n_points = 0;             // radial grid size; 0 selects the default
};

struct MinimizeRun {
  Field field;
  EnergyReport report;
  int iterations = 0;
  bool converged = false;
  bool energy_monotone = true;
  std::string stop_reason;
  std::vector<IterationRecord> trace;
};

struct MinimizeResult {
  MinimizeRun best;
  std::vector<MinimizeRun> runs;  // one per start, in seed order
  double spread = 0.0;            // max pairwise L² distance among converged runs
};

// Initial field of the configured kind on the configured discretization.
Field initial_field(const MinimizeConfig& config, const DomainSpec& domain);

MinimizeResult minimize(const MinimizeConfig& config, const DomainSpec& domain);
// Single run from an explicit starting field.
MinimizeRun minimize_from(const MinimizeConfig& config, const Field& start);

// Energy report of a field under the configured functional.
EnergyReport evaluate_energy(const MinimizeConfig& config, const Field& field);

struct TruncatedReport {
  MinimizeRun run;
  double m_beta = 0.0;
  bool lower_ok = false;      // u ≥ −1e−6
  bool upper_m_ok = false;    // u ≤ M_β + 1e−6
  bool checks_one = false;    // β ≥ √8
  bool upper_one_ok = true;   // u ≤ 1 + 1e−6 when checked
  double cubic_grad_norm = 0.0;
  bool cubic_solution = false;  // cubic gradient below tolerance (β ≥ K₀ only)
  bool defect = false;          // some bound failed
};

TruncatedReport minimize_truncated_positive(MinimizeConfig config, const DomainSpec& domain);

struct WFieldCheck {
  double min_w = 0.0;
  double min_u = 0.0;
  bool holds = false;
};

// w = −Δu + (β/2)u on the interior grid; holds iff w > −1e−7 and u > −1e−7.
WFieldCheck w_field_check(const Field& field, double beta);

struct GammaPoint {
  double gamma = 0.0;
  MinimizeRun run;
  double sup_norm = 0.0;
  double min_value = 0.0;
  double rescale_residual = 0.0;  // 0 at γ = 0
};

struct GammaSweep {
  std::vector<GammaPoint> points;
  std::vector<double> increments;  // ‖u_{γᵢ} − u_{γᵢ₊₁}‖∞
};

// Warm-started sweep over descending γ on a rectangle.
GammaSweep gamma_sweep(const DomainSpec& domain, const std::vector<double>& gammas, MinimizeConfig config);

// Cubic EFK gradient norm at β = γ^{−1/2} of w(x) = u_γ(γ^{1/4}x) on the domain scaled by γ^{−1/4}.
double gamma_rescale_residual(const SpectralField& u_gamma, double gamma);

SpectralField random_spectral_field(const DomainSpec& domain, const std::vector<int>& modes, std::uint64_t seed,
                                    double amplitude, bool positive);
RadialField random_radial_field(const DomainSpec& domain, int n_points, std::uint64_t seed, double amplitude,
                                bool positive);

// Sup norm of a field sampled on a fine grid (spectral) or its nodes (radial).
double fine_sup_norm(const Field& field);
double fine_min(const Field& field);
double fine_max(const Field& field);

}  // namespace efk
