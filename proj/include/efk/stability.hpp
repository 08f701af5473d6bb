#pragma once

#include "efk/field.hpp"

namespace efk {

struct EigenOptions {
  double tol = 1e-7;        // ‖Av − λv‖ / ‖v‖
  int max_outer = 400;
  double inner_tol = 1e-11;
  int max_inner = 20000;
};

struct EigenResult {
  double value = 0.0;
  Field vector;
  double residual = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  int shift_retries = 0;
  bool converged = false;
};

// Smallest eigenpair of Δ² − βΔ + V, V = u² − 1 or 3u² − 1, by shifted inverse iteration.
// The eigenvector is L²-normalized with positive mean.
EigenResult smallest_eigenpair(const Field& u, double beta, LinearizedPotential potential,
                               const EigenOptions& options = {});

// ⟨Av, v⟩ / ⟨v, v⟩.
double rayleigh_quotient(const Field& u, double beta, LinearizedPotential potential, const Field& v);

struct StabilityReport {
  double mu1 = 0.0;
  double nu1 = 0.0;
  Field eigvec_mu;
  Field eigvec_nu;
  double residual_mu = 0.0;
  double residual_nu = 0.0;
  bool converged = false;
  bool strictly_stable = false;  // ν₁ > tol
  bool ordered = false;          // ν₁ − μ₁ ≥ −1e−8
  double min_u2v2 = 0.0;         // quadrature of 2∫u²v² with v = eigvec_nu
};

StabilityReport stability(const Field& u, double beta, double stable_tol = 1e-8, const EigenOptions& options = {});

// v normalized to positive mean is ≥ −1e−6·‖v‖∞ on the interior grid.
bool eigvec_positivity(const Field& v);

}  // namespace efk
