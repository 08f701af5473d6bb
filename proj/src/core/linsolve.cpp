#include "efk/linsolve.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "efk/error.hpp"

namespace efk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

SolveResult pcg(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                std::span<double> x, double rel_tol, int max_iters) {
  require(b.size() == x.size(), "pcg: size mismatch");
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), ap(n);
  a(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  const double bnorm = std::sqrt(dot(b, b));
  SolveResult res;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  precond(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iters; ++it) {
    res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    if (res.relative_residual < rel_tol) {
      res.converged = true;
      res.iterations = it;
      return res;
    }
    a(p, ap);
    const double curv = dot(p, ap);
    if (!(curv > 0.0)) {
      res.negative_curvature = true;
      res.iterations = it;
      return res;
    }
    const double alpha = rz / curv;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    precond(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.iterations = max_iters;
  res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
  res.converged = res.relative_residual < rel_tol;
  return res;
}

SolveResult gmres(const LinearOperator& a, const LinearOperator& precond, std::span<const double> b,
                  std::span<double> x, double rel_tol, int restart, int max_iters) {
  require(b.size() == x.size(), "gmres: size mismatch");
  require(restart >= 1, "gmres: restart must be positive");
  const std::size_t n = b.size();
  SolveResult res;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    res.converged = true;
    return res;
  }
  std::vector<double> r(n), w(n), z(n);
  int total = 0;
  while (total < max_iters) {
    a(x, w);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
    const double beta = std::sqrt(dot(r, r));
    res.relative_residual = beta / bnorm;
    if (res.relative_residual < rel_tol) {
      res.converged = true;
      break;
    }
    const int m = restart;
    std::vector<std::vector<double>> v(m + 1, std::vector<double>(n));
    std::vector<std::vector<double>> zs(m, std::vector<double>(n));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    std::vector<double> cs(m), sn(m), gvec(m + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    gvec[0] = beta;
    int k = 0;
    for (; k < m && total < max_iters; ++k, ++total) {
      precond(v[k], zs[k]);
      a(zs[k], w);
      for (int j = 0; j <= k; ++j) {
        h(j, k) = dot(w, v[j]);
        for (std::size_t i = 0; i < n; ++i) w[i] -= h(j, k) * v[j][i];
      }
      h(k + 1, k) = std::sqrt(dot(w, w));
      if (h(k + 1, k) > 0.0)
        for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / h(k + 1, k);
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h(j, k) + sn[j] * h(j + 1, k);
        h(j + 1, k) = -sn[j] * h(j, k) + cs[j] * h(j + 1, k);
        h(j, k) = t;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      cs[k] = denom == 0.0 ? 1.0 : h(k, k) / denom;
      sn[k] = denom == 0.0 ? 0.0 : h(k + 1, k) / denom;
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      gvec[k + 1] = -sn[k] * gvec[k];
      gvec[k] = cs[k] * gvec[k];
      res.relative_residual = std::abs(gvec[k + 1]) / bnorm;
      if (res.relative_residual < rel_tol) {
        ++k;
        ++total;
        break;
      }
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(k);
    for (int j = k - 1; j >= 0; --j) {
      double s = gvec[j];
      for (int l = j + 1; l < k; ++l) s -= h(j, l) * y(l);
      y(j) = h(j, j) == 0.0 ? 0.0 : s / h(j, j);
    }
    for (int j = 0; j < k; ++j)
      for (std::size_t i = 0; i < n; ++i) x[i] += y(j) * zs[j][i];
    if (res.relative_residual < rel_tol) {
      a(x, w);
      for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
      res.relative_residual = std::sqrt(dot(r, r)) / bnorm;
      res.converged = res.relative_residual < 10.0 * rel_tol;
      if (res.converged) break;
    }
  }
  res.iterations = total;
  return res;
}

}  // namespace efk
