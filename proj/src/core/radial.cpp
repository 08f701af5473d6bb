#include "efk/radial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "efk/error.hpp"

namespace efk {

RadialGrid::RadialGrid(DomainSpec domain, int n_points) : domain_(std::move(domain)), n_(n_points) {
  domain_.validate();
  require(domain_.radial(), "radial grids need a ball or an annulus");
  require(domain_.dim >= 2, "radial grids need N >= 2; use the sine basis for N = 1");
  require(n_points >= 8, "radial grid needs at least 8 points");
  const int dim = domain_.dim;
  const double r0 = ball() ? 0.0 : domain_.inner_radius;
  first_ = ball() ? 0 : 1;
  h_ = (domain_.radius - r0) / (n_ - 1);
  sigma_ = unit_sphere_area(dim);
  r_.resize(n_);
  for (int i = 0; i < n_; ++i) r_[i] = r0 + i * h_;
  r_[n_ - 1] = domain_.radius;
  faces_.resize(n_ - 1);
  for (int i = 0; i + 1 < n_; ++i) faces_[i] = std::pow(r_[i] + 0.5 * h_, dim - 1) / h_;
  volumes_.assign(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double lo = std::max(r0, r_[i] - 0.5 * h_);
    const double hi = std::min(domain_.radius, r_[i] + 0.5 * h_);
    volumes_[i] = (std::pow(hi, dim) - std::pow(lo, dim)) / dim;
  }
}

void RadialGrid::apply_stiffness(std::span<const double> u, std::span<double> out) const {
  require(static_cast<int>(u.size()) == n_ && static_cast<int>(out.size()) == n_, "stiffness: size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (int i = 0; i + 1 < n_; ++i) {
    const double flux = faces_[i] * (u[i + 1] - u[i]);
    out[i] -= flux;
    out[i + 1] += flux;
  }
}

std::vector<double> RadialGrid::laplacian(std::span<const double> u) const {
  std::vector<double> ku(n_);
  apply_stiffness(u, ku);
  std::vector<double> lap(n_, 0.0);
  for (int i = first_; i <= last_unknown(); ++i) lap[i] = -ku[i] / volumes_[i];
  return lap;
}

// ---------------------------------------------------------------------------

RadialField::RadialField(DomainSpec domain, int n_points)
    : grid_(std::move(domain), n_points), values_(static_cast<std::size_t>(n_points), 0.0) {}

RadialField::RadialField(DomainSpec domain, int n_points, std::vector<double> values)
    : grid_(std::move(domain), n_points), values_(std::move(values)) {
  require(static_cast<int>(values_.size()) == n_points, "radial value count must equal n_points");
  for (double v : values_)
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite value in radial field");
  values_.back() = 0.0;
  if (!grid_.ball()) values_.front() = 0.0;
}

bool RadialField::same_discretization(const RadialField& other) const {
  return domain() == other.domain() && n_points() == other.n_points();
}

double RadialField::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double RadialField::dot(const RadialField& other) const {
  require(same_discretization(other), "dot: mismatched radial grids");
  const auto& vol = grid_.volumes();
  double s = 0.0;
  for (int i = grid_.first_unknown(); i <= grid_.last_unknown(); ++i) s += vol[i] * values_[i] * other.values_[i];
  return grid_.sigma() * s;
}

double RadialField::l2_norm() const { return std::sqrt(dot(*this)); }

RadialField& RadialField::operator+=(const RadialField& other) {
  require(same_discretization(other), "radial sum: mismatched grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& other) {
  require(same_discretization(other), "radial difference: mismatched grids");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

// ---------------------------------------------------------------------------

namespace {

void check_values(const RadialField& u) {
  for (double v : u.values())
    if (!std::isfinite(v)) fail(ErrorKind::NonFinite, "non-finite value in radial field");
}

}  // namespace

EnergyReport radial_energy(const RadialField& u, double beta, NonlinearityKind nonlinearity) {
  check_values(u);
  const RadialGrid& g = u.grid();
  require(g.n_points() >= 64, "radial energy needs at least 64 points");
  const Nonlinearity nl(nonlinearity, beta);
  const auto& x = u.values();
  const auto lap = g.laplacian(x);
  const auto& vol = g.volumes();
  const auto& faces = g.face_weights();
  double bi = 0.0;
  double pot = 0.0;
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) {
    bi += vol[i] * lap[i] * lap[i];
    pot += vol[i] * nl.potential(x[i]);
  }
  double grad = 0.0;
  for (int i = 0; i + 1 < g.n_points(); ++i) {
    const double d = x[i + 1] - x[i];
    grad += faces[i] * d * d;
  }
  EnergyReport r;
  r.j_beta = g.sigma() * (0.5 * bi + 0.5 * beta * grad + pot);
  r.j_beta_shifted = r.j_beta + 0.25 * g.domain().volume();
  const RadialField gr = radial_gradient(u, beta, nonlinearity);
  double dual = 0.0;
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) dual += gr.values()[i] * gr.values()[i] / vol[i];
  r.grad_norm = std::sqrt(dual / g.sigma());
  r.u_min = std::min(0.0, *std::min_element(x.begin(), x.end()));
  r.u_max = std::max(0.0, *std::max_element(x.begin(), x.end()));
  r.flags = bound_flags(r.u_min, r.u_max, beta);
  return r;
}

RadialField radial_gradient(const RadialField& u, double beta, NonlinearityKind nonlinearity) {
  check_values(u);
  const RadialGrid& g = u.grid();
  const Nonlinearity nl(nonlinearity, beta);
  const int n = g.n_points();
  const auto& x = u.values();
  const auto& vol = g.volumes();
  std::vector<double> ku(n);
  g.apply_stiffness(x, ku);
  std::vector<double> q(n, 0.0);
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) q[i] = ku[i] / vol[i];
  std::vector<double> kq(n);
  g.apply_stiffness(q, kq);
  RadialField out(u.domain(), n);
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i)
    out.values()[i] = g.sigma() * (kq[i] + beta * ku[i] + vol[i] * nl.dpotential(x[i]));
  return out;
}

RadialField radial_apply_linearized(const RadialField& u, double beta, const RadialField& v,
                                    LinearizedPotential potential) {
  if (!u.same_discretization(v)) fail(ErrorKind::InvalidArgument, "apply_linearized: mismatched radial grids");
  const RadialGrid& g = u.grid();
  const int n = g.n_points();
  const auto& vol = g.volumes();
  const double c = potential == LinearizedPotential::USquaredMinusOne ? 1.0 : 3.0;
  std::vector<double> kv(n);
  g.apply_stiffness(v.values(), kv);
  std::vector<double> q(n, 0.0);
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) q[i] = kv[i] / vol[i];
  std::vector<double> kq(n);
  g.apply_stiffness(q, kq);
  RadialField out(u.domain(), n);
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) {
    const double ui = u.values()[i];
    out.values()[i] = (kq[i] + beta * kv[i]) / vol[i] + (c * ui * ui - 1.0) * v.values()[i];
  }
  return out;
}

RadialSystemState radial_system_state(const RadialField& u, double beta) {
  const RadialGrid& g = u.grid();
  const auto lap_u = g.laplacian(u.values());
  RadialField w(u.domain(), g.n_points());
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i)
    w.values()[i] = -lap_u[i] + 0.5 * beta * u.values()[i];
  const auto lap_w = g.laplacian(w.values());
  double worst = 0.0;
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) {
    const double x = u.values()[i];
    const double res = lap_w[i] + (1.0 + 0.25 * beta * beta) * x - x * x * x - 0.5 * beta * w.values()[i];
    worst = std::max(worst, std::abs(res));
  }
  return {u, w, worst};
}

// ---------------------------------------------------------------------------

namespace {

struct TridiagonalEigen {
  double value;
  RadialField vector;
};

// Smallest eigenpair of V^{-1/2} K V^{-1/2} restricted to the unknowns.
TridiagonalEigen smallest_radial_mode(const DomainSpec& domain, int n_points) {
  RadialGrid g(domain, n_points);
  const int first = g.first_unknown();
  const int m = g.unknowns();
  const auto& vol = g.volumes();
  const auto& faces = g.face_weights();
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(m - 1);
  for (int k = 0; k < m; ++k) {
    const int i = first + k;
    const double left = i > 0 ? faces[i - 1] : 0.0;
    diag(k) = (left + faces[i]) / vol[i];
    if (k + 1 < m) sub(k) = -faces[i] / std::sqrt(vol[i] * vol[i + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) fail(ErrorKind::NotConverged, "tridiagonal eigensolver failed");
  Eigen::VectorXd y = es.eigenvectors().col(0);
  RadialField f(domain, n_points);
  double mean = 0.0;
  for (int k = 0; k < m; ++k) {
    f.values()[first + k] = y(k) / std::sqrt(vol[first + k]);
    mean += f.values()[first + k];
  }
  if (mean < 0.0) f *= -1.0;
  f *= 1.0 / f.l2_norm();
  return {es.eigenvalues()(0), f};
}

}  // namespace

double lambda1_discrete(const DomainSpec& domain, int n_points) {
  return smallest_radial_mode(domain, n_points).value;
}

RadialField phi1_discrete(const DomainSpec& domain, int n_points) {
  return smallest_radial_mode(domain, n_points).vector;
}

// ---------------------------------------------------------------------------

namespace {

int argmax_unknown(const RadialGrid& g, std::span<const double> x) {
  int best = g.first_unknown();
  for (int i = g.first_unknown(); i <= g.last_unknown(); ++i)
    if (x[i] > x[best]) best = i;
  return best;
}

}  // namespace

FlipResult flip_transform(const RadialField& u) {
  const RadialGrid& g = u.grid();
  const auto& x = u.values();
  FlipResult out{u};
  const double scale = u.sup_norm();
  if (scale == 0.0) return out;
  const double tol = 1e-12 * scale;
  const double hi = *std::max_element(x.begin(), x.end());
  const double lo = *std::min_element(x.begin(), x.end());
  if (!(hi > tol && lo < -tol)) return out;

  if (g.ball()) {
    double s = 1.0;
    if (argmax_unknown(g, x) == 0) s = -1.0;
    std::vector<double> y(x.begin(), x.end());
    for (double& v : y) v *= s;
    const int eta = argmax_unknown(g, y);
    const double big_m = y[eta];
    if (eta == 0 || big_m > 1.0) return out;
    const double c = (1.0 - big_m) / (1.0 + big_m);
    for (int i = 0; i < eta; ++i) out.field.values()[i] = s * (c * (big_m - y[i]) + big_m);
    out.applied = true;
    out.level = big_m;
    out.factor = c;
    out.eta = eta;
    return out;
  }

  int eta = argmax_unknown(g, x);
  std::vector<double> neg(x.begin(), x.end());
  for (double& v : neg) v = -v;
  int mu = argmax_unknown(g, neg);
  double s = 1.0;
  std::vector<double> y(x.begin(), x.end());
  if (mu < eta) {
    s = -1.0;
    y = neg;
    std::swap(eta, mu);
  }
  const double big_m = y[eta];
  const double small_m = -y[mu];
  if (big_m > 1.0 || small_m > 1.0) return out;
  const double c = (small_m - big_m) / (small_m + big_m);
  auto& v = out.field.values();
  for (int i = eta + 1; i < mu; ++i) v[i] = s * (c * (big_m - y[i]) + big_m);
  for (int i = mu; i < g.n_points(); ++i) v[i] = -s * y[i];
  out.applied = true;
  out.level = big_m;
  out.factor = c;
  out.eta = eta;
  out.mu = mu;
  return out;
}

int count_sign_changes(std::span<const double> d, double rel_tol) {
  double big = 0.0;
  for (double v : d) big = std::max(big, std::abs(v));
  if (big == 0.0) return 0;
  int changes = 0;
  int last = 0;
  for (double v : d) {
    if (std::abs(v) < rel_tol * big) continue;
    const int sgn = v > 0.0 ? 1 : -1;
    if (last != 0 && sgn != last) ++changes;
    last = sgn;
  }
  return changes;
}

MonotonicityProfile monotonicity_profile(const RadialField& u, double rel_tol) {
  const auto& x = u.values();
  std::vector<double> d(x.size() - 1);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) d[i] = x[i + 1] - x[i];
  MonotonicityProfile p;
  p.sign_changes = count_sign_changes(d, rel_tol);
  const double scale = u.sup_norm();
  const double hi = *std::max_element(x.begin(), x.end());
  const double lo = *std::min_element(x.begin(), x.end());
  p.sign_definite = lo >= -rel_tol * scale || hi <= rel_tol * scale;
  return p;
}

}  // namespace efk
