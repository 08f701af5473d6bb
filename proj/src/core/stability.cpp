#include "efk/stability.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "efk/error.hpp"
#include "efk/linsolve.hpp"

namespace efk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

class SpectralLinearized {
 public:
  SpectralLinearized(const SpectralField& u, double beta, LinearizedPotential potential)
      : basis_(u.domain(), u.modes()), pot_(linearized_potential_grid(u, potential)) {
    const QuadraticForm q = QuadraticForm::efk(beta);
    for (double lam : basis_.eigenvalues()) sym_.push_back(q.symbol(lam));
    grid_.resize(basis_.padded_size());
  }

  std::size_t size() const { return sym_.size(); }
  const std::vector<double>& symbols() const { return sym_; }
  const std::vector<double>& potential() const { return pot_; }

  void apply(std::span<const double> x, std::span<double> y) const {
    basis_.synthesize(x, grid_);
    for (std::size_t j = 0; j < grid_.size(); ++j) grid_[j] *= pot_[j];
    basis_.analyze(grid_, y);
    for (std::size_t i = 0; i < sym_.size(); ++i) y[i] += sym_[i] * x[i];
  }

 private:
  SineBasis basis_;
  std::vector<double> pot_;
  std::vector<double> sym_;
  mutable std::vector<double> grid_;
};

void normalize_positive_mean(std::vector<double>& v, const std::vector<double>& values) {
  const double mean = std::accumulate(values.begin(), values.end(), 0.0);
  if (mean < 0.0)
    for (double& x : v) x = -x;
}

EigenResult spectral_eigenpair(const SpectralField& u, double beta, LinearizedPotential potential,
                               const EigenOptions& opt) {
  SpectralLinearized op(u, beta, potential);
  const std::size_t n = op.size();
  const auto& sym = op.symbols();
  const double min_v = *std::min_element(op.potential().begin(), op.potential().end());
  const double avg_v = std::accumulate(op.potential().begin(), op.potential().end(), 0.0) / op.potential().size();
  const double lower = *std::min_element(sym.begin(), sym.end()) + min_v;

  std::vector<double> v(n, 0.0);
  v[std::min_element(sym.begin(), sym.end()) - sym.begin()] = 1.0;
  const double un = u.l2_norm();
  if (un > 0.0)
    for (std::size_t i = 0; i < n; ++i) v[i] += 0.5 * u.coeffs()[i] / un;
  double vn = norm(v);
  for (double& x : v) x /= vn;

  EigenResult res{0.0, u};
  std::vector<double> av(n), x(n), r(n);
  double sigma = lower - 1.0;
  double margin_scale = 1.0;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    op.apply(v, av);
    const double rho = dot(v, av);
    for (std::size_t i = 0; i < n; ++i) r[i] = av[i] - rho * v[i];
    const double resid = norm(r);
    res.value = rho;
    res.residual = resid;
    res.outer_iterations = outer;
    if (resid < opt.tol) {
      res.converged = true;
      break;
    }
    if (outer >= 2) sigma = std::max(sigma, rho - margin_scale * std::max(2.0 * resid, 1e-4 * (1.0 + std::abs(rho))));
    const double s = sigma;
    LinearOperator a = [&](std::span<const double> in, std::span<double> out) {
      op.apply(in, out);
      for (std::size_t i = 0; i < in.size(); ++i) out[i] -= s * in[i];
    };
    LinearOperator m = [&](std::span<const double> in, std::span<double> out) {
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] / std::max(sym[i] + avg_v - s, 0.1);
    };
    for (std::size_t i = 0; i < n; ++i) x[i] = v[i] / (rho - s);
    const SolveResult sr = pcg(a, m, v, x, opt.inner_tol, opt.max_inner);
    res.inner_iterations += sr.iterations;
    if (sr.negative_curvature) {
      // The shift passed the bottom of the spectrum; back off and keep the current vector.
      ++res.shift_retries;
      if (res.shift_retries > 30) fail(ErrorKind::NotConverged, "inverse iteration: shift control failed");
      margin_scale *= 4.0;
      sigma = rho - margin_scale * std::max(2.0 * resid, 1e-4 * (1.0 + std::abs(rho)));
      continue;
    }
    vn = norm(x);
    if (!(vn > 0.0) || !std::isfinite(vn)) fail(ErrorKind::NonFinite, "inverse iteration produced a non-finite vector");
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] / vn;
  }
  SpectralField vec(u.domain(), u.modes(), v);
  normalize_positive_mean(vec.coeffs(), vec.padded_values());
  res.vector = vec;
  return res;
}

EigenResult radial_eigenpair(const RadialField& u, double beta, LinearizedPotential potential,
                             const EigenOptions& opt) {
  const RadialGrid& g = u.grid();
  const int first = g.first_unknown();
  const int m = g.unknowns();
  const auto& vol = g.volumes();
  const auto& faces = g.face_weights();
  const double c = potential == LinearizedPotential::USquaredMinusOne ? 1.0 : 3.0;
  std::vector<Eigen::Triplet<double>> tk, tv, tp;
  for (int a = 0; a < m; ++a) {
    const int i = first + a;
    const double left = i > 0 ? faces[i - 1] : 0.0;
    tk.emplace_back(a, a, left + faces[i]);
    if (a + 1 < m) {
      tk.emplace_back(a, a + 1, -faces[i]);
      tk.emplace_back(a + 1, a, -faces[i]);
    }
    tv.emplace_back(a, a, 1.0 / vol[i]);
    const double ui = u.values()[i];
    tp.emplace_back(a, a, vol[i] * (c * ui * ui - 1.0));
  }
  Eigen::SparseMatrix<double> k(m, m), vinv(m, m), pv(m, m);
  k.setFromTriplets(tk.begin(), tk.end());
  vinv.setFromTriplets(tv.begin(), tv.end());
  pv.setFromTriplets(tp.begin(), tp.end());
  const Eigen::SparseMatrix<double> a = k * vinv * k + beta * k + pv;
  Eigen::VectorXd mass(m);
  for (int i = 0; i < m; ++i) mass(i) = vol[first + i];

  auto mnorm = [&](const Eigen::VectorXd& x) { return std::sqrt(x.dot(mass.cwiseProduct(x))); };
  const double min_v = -1.0;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m);
  v /= mnorm(v);
  EigenResult res{0.0, u};
  double sigma = min_v - 1.0;
  double margin_scale = 1.0;
  for (int outer = 0; outer < opt.max_outer; ++outer) {
    const Eigen::VectorXd av = a * v;
    const double rho = v.dot(av);
    const Eigen::VectorXd r = av - rho * mass.cwiseProduct(v);
    const double resid = std::sqrt(r.dot(r.cwiseQuotient(mass)));
    res.value = rho;
    res.residual = resid;
    res.outer_iterations = outer;
    if (resid < opt.tol) {
      res.converged = true;
      break;
    }
    if (outer >= 2) sigma = std::max(sigma, rho - margin_scale * std::max(2.0 * resid, 1e-6 * (1.0 + std::abs(rho))));
    Eigen::SparseMatrix<double> shifted = a;
    for (int i = 0; i < m; ++i) shifted.coeffRef(i, i) -= sigma * mass(i);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(shifted);
    if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array() <= 0.0).any()) {
      ++res.shift_retries;
      if (res.shift_retries > 30) fail(ErrorKind::NotConverged, "inverse iteration: shift control failed");
      margin_scale *= 4.0;
      sigma = rho - margin_scale * std::max(2.0 * resid, 1e-6 * (1.0 + std::abs(rho)));
      continue;
    }
    res.inner_iterations += 1;
    Eigen::VectorXd x = ldlt.solve(mass.cwiseProduct(v));
    v = x / mnorm(x);
  }
  RadialField vec(u.domain(), u.n_points());
  for (int i = 0; i < m; ++i) vec.values()[first + i] = v(i);
  vec *= 1.0 / vec.l2_norm();
  normalize_positive_mean(vec.values(), vec.values());
  res.vector = vec;
  return res;
}

}  // namespace

EigenResult smallest_eigenpair(const Field& u, double beta, LinearizedPotential potential, const EigenOptions& options) {
  if (const auto* s = std::get_if<SpectralField>(&u)) return spectral_eigenpair(*s, beta, potential, options);
  return radial_eigenpair(std::get<RadialField>(u), beta, potential, options);
}

double rayleigh_quotient(const Field& u, double beta, LinearizedPotential potential, const Field& v) {
  if (const auto* s = std::get_if<SpectralField>(&u)) {
    const auto& vs = std::get<SpectralField>(v);
    return apply_linearized(*s, beta, vs, potential).dot(vs) / vs.dot(vs);
  }
  const auto& ur = std::get<RadialField>(u);
  const auto& vr = std::get<RadialField>(v);
  return radial_apply_linearized(ur, beta, vr, potential).dot(vr) / vr.dot(vr);
}

StabilityReport stability(const Field& u, double beta, double stable_tol, const EigenOptions& options) {
  StabilityReport rep{0.0, 0.0, u, u};
  const EigenResult mu = smallest_eigenpair(u, beta, LinearizedPotential::USquaredMinusOne, options);
  const EigenResult nu = smallest_eigenpair(u, beta, LinearizedPotential::ThreeUSquaredMinusOne, options);
  rep.mu1 = mu.value;
  rep.nu1 = nu.value;
  rep.eigvec_mu = mu.vector;
  rep.eigvec_nu = nu.vector;
  rep.residual_mu = mu.residual;
  rep.residual_nu = nu.residual;
  rep.converged = mu.converged && nu.converged;
  rep.strictly_stable = rep.nu1 > stable_tol;
  rep.ordered = rep.nu1 - rep.mu1 >= -1e-8;
  if (const auto* s = std::get_if<SpectralField>(&u)) {
    SineBasis b(s->domain(), s->modes());
    const auto uu = s->padded_values();
    const auto vv = std::get<SpectralField>(nu.vector).padded_values();
    double q = 0.0;
    for (std::size_t j = 0; j < uu.size(); ++j) q += uu[j] * uu[j] * vv[j] * vv[j];
    rep.min_u2v2 = 2.0 * b.quadrature_weight() * q;
  } else {
    const auto& ur = std::get<RadialField>(u);
    const auto& vr = std::get<RadialField>(nu.vector);
    const auto& g = ur.grid();
    double q = 0.0;
    for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) {
      const double a = ur.values()[i] * vr.values()[i];
      q += g.volumes()[i] * a * a;
    }
    rep.min_u2v2 = 2.0 * g.sigma() * q;
  }
  return rep;
}

bool eigvec_positivity(const Field& v) {
  std::vector<double> values;
  if (const auto* s = std::get_if<SpectralField>(&v)) {
    values = s->padded_values();
  } else {
    const auto& r = std::get<RadialField>(v);
    for (int i = r.grid().first_unknown(); i <= r.grid().last_unknown(); ++i) values.push_back(r.values()[i]);
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0);
  const double s = mean < 0.0 ? -1.0 : 1.0;
  double sup = 0.0;
  double lo = 0.0;
  for (double x : values) {
    sup = std::max(sup, std::abs(x));
    lo = std::min(lo, s * x);
  }
  return sup > 0.0 && lo >= -1e-6 * sup;
}

}  // namespace efk
