#include "efk/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <numeric>

#include "efk/error.hpp"

namespace efk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

}  // namespace

double Objective::delta(std::span<const double> x, std::span<const double> d, double t) const {
  std::vector<double> xt(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + t * d[i];
  return value(xt) - value(x);
}

void Objective::precondition(std::span<const double> g, std::span<double> out) const {
  std::copy(g.begin(), g.end(), out.begin());
}

double Objective::norm(std::span<const double> x) const { return std::sqrt(dot(x, x)); }

double Objective::dual_norm(std::span<const double> g) const { return std::sqrt(dot(g, g)); }

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0, const LbfgsOptions& options) {
  require(x0.size() == objective.size(), "initial guess has the wrong size");
  require(options.grad_tol > 0.0, "grad_tol must be positive");
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), g_new(n), d(n), q(n), r(n), x_new(n);
  double energy = objective.value_and_gradient(res.x, g);
  if (!std::isfinite(energy)) fail(ErrorKind::NonFinite, "objective is not finite at the initial guess");
  std::deque<Pair> memory;
  std::vector<double> alpha;
  int failures = 0;

  for (int it = 0;; ++it) {
    const double gnorm = objective.dual_norm(g);
    res.trace.push_back({it, energy, gnorm, it == 0 ? 0.0 : res.trace.back().step});
    res.iterations = it;
    if (gnorm < options.grad_tol * std::max(1.0, objective.norm(res.x))) {
      res.converged = true;
      res.stop_reason = "gradient tolerance reached";
      break;
    }
    if (it >= options.max_iters) {
      res.stop_reason = "iteration cap reached";
      break;
    }

    // Two-loop recursion with the preconditioner as initial inverse Hessian.
    q = g;
    alpha.assign(memory.size(), 0.0);
    for (std::size_t k = memory.size(); k-- > 0;) {
      alpha[k] = memory[k].rho * dot(memory[k].s, q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * memory[k].y[i];
    }
    objective.precondition(q, r);
    if (!memory.empty()) {
      const Pair& last = memory.back();
      std::vector<double> py(n);
      objective.precondition(last.y, py);
      const double gamma = dot(last.s, last.y) / dot(last.y, py);
      for (double& v : r) v *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double b = memory[k].rho * dot(memory[k].y, r);
      for (std::size_t i = 0; i < n; ++i) r[i] += (alpha[k] - b) * memory[k].s[i];
    }
    for (std::size_t i = 0; i < n; ++i) d[i] = -r[i];
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      objective.precondition(g, r);
      for (std::size_t i = 0; i < n; ++i) d[i] = -r[i];
      slope = dot(g, d);
    }

    double t = 1.0;
    bool accepted = false;
    double change = 0.0;
    for (int bt = 0; bt <= options.max_backtracks; ++bt) {
      change = objective.delta(res.x, d, t);
      if (std::isfinite(change) && change <= options.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (memory.empty() || ++failures > 1) {
        res.stop_reason = "line search failed";
        break;
      }
      memory.clear();
      continue;
    }
    failures = 0;
    for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + t * d[i];
    const double e_new = objective.value_and_gradient(x_new, g_new);
    if (change > 0.0) res.energy_monotone = false;

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - res.x[i];
      p.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(p.s, p.y);
    if (sy > 1e-14 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      memory.push_back(std::move(p));
      if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
    }
    res.x.swap(x_new);
    g.swap(g_new);
    energy = e_new;
    res.trace.back().step = t;
  }
  res.energy = energy;
  res.grad_norm = objective.dual_norm(g);
  return res;
}

}  // namespace efk
