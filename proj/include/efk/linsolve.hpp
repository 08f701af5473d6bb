#pragma once

#include <functional>
#include <span>
#include <vector>

namespace efk {

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct SolveResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool negative_curvature = false;  // PCG only: pᵀAp ≤ 0 encountered
};

// Preconditioned conjugate gradients for symmetric A; x holds the initial guess.
SolveResult pcg(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                std::span<double> x, double rel_tol, int max_iters);

// Right-preconditioned restarted GMRES; x holds the initial guess.
SolveResult gmres(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                  std::span<double> x, double rel_tol, int restart, int max_iters);

}  // namespace efk
