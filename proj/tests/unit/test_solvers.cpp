#include <cmath>
#include <vector>

#include "doctest.h"
#include "efk/lbfgs.hpp"
#include "efk/linsolve.hpp"

using namespace efk;

namespace {

class Rosenbrock : public Objective {
 public:
  std::size_t size() const override { return 4; }
  double value(std::span<const double> x) const override {
    double f = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      f += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    return f;
  }
  double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * t * x[i] - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * t;
    }
    return value(x);
  }
};

// 1D Laplacian plus a shift, stored implicitly.
LinearOperator laplacian(double shift) {
  return [shift](std::span<const double> x, std::span<double> y) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = (2.0 + shift) * x[i];
      if (i > 0) y[i] -= x[i - 1];
      if (i + 1 < n) y[i] -= x[i + 1];
    }
  };
}

const LinearOperator identity = [](std::span<const double> x, std::span<double> y) {
  std::copy(x.begin(), x.end(), y.begin());
};

}  // namespace

TEST_CASE("lbfgs minimizes a nonconvex function") {
  Rosenbrock f;
  LbfgsOptions o;
  o.grad_tol = 1e-10;
  o.max_iters = 2000;
  const LbfgsResult r = lbfgs_minimize(f, {-1.2, 1.0, -1.2, 1.0}, o);
  CHECK(r.converged);
  CHECK(r.energy_monotone);
  for (double x : r.x) CHECK(x == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.trace.size() == static_cast<std::size_t>(r.iterations) + 1);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].energy <= r.trace[i - 1].energy);
}

TEST_CASE("lbfgs reports the iteration cap") {
  Rosenbrock f;
  LbfgsOptions o;
  o.max_iters = 3;
  const LbfgsResult r = lbfgs_minimize(f, {-1.2, 1.0, -1.2, 1.0}, o);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("pcg solves a symmetric positive system") {
  const std::size_t n = 200;
  std::vector<double> b(n), x(n, 0.0), y(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = std::sin(0.1 * i);
  const SolveResult r = pcg(laplacian(0.01), identity, b, x, 1e-12, 1000);
  CHECK(r.converged);
  laplacian(0.01)(x, y);
  double err = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err += std::pow(y[i] - b[i], 2);
    nb += b[i] * b[i];
  }
  CHECK(std::sqrt(err / nb) < 1e-11);
}

TEST_CASE("pcg flags negative curvature") {
  std::vector<double> b(50, 1.0), x(50, 0.0);
  const SolveResult r = pcg(laplacian(-3.0), identity, b, x, 1e-12, 100);
  CHECK(r.negative_curvature);
  CHECK_FALSE(r.converged);
}

TEST_CASE("gmres solves a nonsymmetric system") {
  const std::size_t n = 120;
  const LinearOperator a = [](std::span<const double> x, std::span<double> y) {
    const std::size_t m = x.size();
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = 3.0 * x[i];
      if (i > 0) y[i] -= 1.5 * x[i - 1];
      if (i + 1 < m) y[i] -= 0.5 * x[i + 1];
    }
  };
  const LinearOperator jacobi = [](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] / 3.0;
  };
  std::vector<double> b(n), x(n, 0.0), y(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = 1.0 + 0.01 * i;
  const SolveResult r = gmres(a, jacobi, b, x, 1e-12, 30, 2000);
  CHECK(r.converged);
  a(x, y);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(y[i] - b[i]));
  CHECK(err < 1e-10);
}
