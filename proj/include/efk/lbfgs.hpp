#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace efk {

// Smooth functional on R^n seen by the descent loop.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t size() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual double value_and_gradient(std::span<const double> x, std::span<double> grad) const = 0;
  // J(x + t·d) − J(x). Override when the difference can be formed without cancellation.
  virtual double delta(std::span<const double> x, std::span<const double> d, double t) const;
  // Approximate inverse Hessian applied to g; identity by default.
  virtual void precondition(std::span<const double> g, std::span<double> out) const;
  // Norm of a state and the matching dual norm of a gradient.
  virtual double norm(std::span<const double> x) const;
  virtual double dual_norm(std::span<const double> g) const;
};

struct LbfgsOptions {
  int memory = 10;
  int max_iters = 5000;
  double grad_tol = 1e-9;  // stop when dual_norm(g) < grad_tol·max(1, norm(x))
  double armijo = 1e-4;
  int max_backtracks = 40;
};

struct IterationRecord {
  int iteration = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct LbfgsResult {
  std::vector<double> x;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool energy_monotone = true;
  std::string stop_reason;
  std::vector<IterationRecord> trace;
};

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0, const LbfgsOptions& options);

}  // namespace efk
