#include "efk/minimize.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "efk/error.hpp"
#include "efk/field_io.hpp"

namespace efk {

namespace {

constexpr double kSpectralGradTol = 1e-9;
constexpr double kRadialGradTol = 1e-8;
constexpr int kRandomBand = 8;

class SpectralObjective : public Objective {
 public:
  explicit SpectralObjective(SpectralFunctional fn) : fn_(std::move(fn)) {
    inv_.resize(fn_.symbols().size());
    for (std::size_t i = 0; i < inv_.size(); ++i) inv_[i] = 1.0 / (fn_.symbols()[i] + 1.0);
  }
  std::size_t size() const override { return inv_.size(); }
  double value(std::span<const double> x) const override { return fn_.value(x); }
  double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
    return fn_.value_and_gradient(x, g);
  }
  double delta(std::span<const double> x, std::span<const double> d, double t) const override {
    return fn_.delta(x, d, t);
  }
  void precondition(std::span<const double> g, std::span<double> out) const override {
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = inv_[i] * g[i];
  }

 private:
  SpectralFunctional fn_;
  std::vector<double> inv_;
};

// Energy of a radial field in the unknown nodal values, with a banded preconditioner
// built from the quadratic part plus the mass matrix.
class RadialObjective : public Objective {
 public:
  RadialObjective(RadialGrid grid, double beta, Nonlinearity nl)
      : grid_(std::move(grid)), beta_(beta), nl_(nl), first_(grid_.first_unknown()), m_(grid_.unknowns()) {
    const auto& vol = grid_.volumes();
    const auto& faces = grid_.face_weights();
    Eigen::SparseMatrix<double> k(m_, m_);
    std::vector<Eigen::Triplet<double>> trip;
    for (int a = 0; a < m_; ++a) {
      const int i = first_ + a;
      const double left = i > 0 ? faces[i - 1] : 0.0;
      trip.emplace_back(a, a, left + faces[i]);
      if (a + 1 < m_) {
        trip.emplace_back(a, a + 1, -faces[i]);
        trip.emplace_back(a + 1, a, -faces[i]);
      }
    }
    k.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseMatrix<double> vinv(m_, m_);
    Eigen::SparseMatrix<double> mass(m_, m_);
    std::vector<Eigen::Triplet<double>> dv, dm;
    for (int a = 0; a < m_; ++a) {
      dv.emplace_back(a, a, 1.0 / vol[first_ + a]);
      dm.emplace_back(a, a, vol[first_ + a]);
    }
    vinv.setFromTriplets(dv.begin(), dv.end());
    mass.setFromTriplets(dm.begin(), dm.end());
    Eigen::SparseMatrix<double> h = k * vinv * k + beta_ * k + mass;
    h *= grid_.sigma();
    solver_.compute(h);
    if (solver_.info() != Eigen::Success) fail(ErrorKind::NotConverged, "radial preconditioner factorization failed");
  }

  std::size_t size() const override { return static_cast<std::size_t>(m_); }

  std::vector<double> nodes(std::span<const double> x) const {
    std::vector<double> u(grid_.n_points(), 0.0);
    std::copy(x.begin(), x.end(), u.begin() + first_);
    return u;
  }

  double quadratic(std::span<const double> a, std::span<const double> b) const {
    const auto ua = nodes(a);
    const auto ub = nodes(b);
    const int n = grid_.n_points();
    std::vector<double> ka(n), kb(n);
    grid_.apply_stiffness(ua, ka);
    grid_.apply_stiffness(ub, kb);
    const auto& vol = grid_.volumes();
    double s = 0.0;
    for (int i = first_; i < first_ + m_; ++i) s += ka[i] * kb[i] / vol[i];
    double g = 0.0;
    for (int i = 0; i + 1 < n; ++i) g += grid_.face_weights()[i] * (ua[i + 1] - ua[i]) * (ub[i + 1] - ub[i]);
    return grid_.sigma() * (s + beta_ * g);
  }

  double value(std::span<const double> x) const override {
    double p = 0.0;
    for (int a = 0; a < m_; ++a) p += grid_.volumes()[first_ + a] * nl_.potential(x[a]);
    return 0.5 * quadratic(x, x) + grid_.sigma() * p;
  }

  double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
    RadialField u(grid_.domain(), grid_.n_points(), nodes(x));
    const RadialField gr = radial_gradient(u, beta_, nl_.kind());
    for (int a = 0; a < m_; ++a) g[a] = gr.values()[first_ + a];
    return value(x);
  }

  double delta(std::span<const double> x, std::span<const double> d, double t) const override {
    double p = 0.0;
    for (int a = 0; a < m_; ++a) p += grid_.volumes()[first_ + a] * nl_.potential_delta(x[a] + t * d[a], x[a]);
    return t * quadratic(x, d) + 0.5 * t * t * quadratic(d, d) + grid_.sigma() * p;
  }

  void precondition(std::span<const double> g, std::span<double> out) const override {
    Eigen::Map<const Eigen::VectorXd> gv(g.data(), m_);
    Eigen::VectorXd z = solver_.solve(gv);
    std::copy(z.data(), z.data() + m_, out.begin());
  }

  double norm(std::span<const double> x) const override {
    double s = 0.0;
    for (int a = 0; a < m_; ++a) s += grid_.volumes()[first_ + a] * x[a] * x[a];
    return std::sqrt(grid_.sigma() * s);
  }

  double dual_norm(std::span<const double> g) const override {
    double s = 0.0;
    for (int a = 0; a < m_; ++a) s += g[a] * g[a] / grid_.volumes()[first_ + a];
    return std::sqrt(s / grid_.sigma());
  }

 private:
  RadialGrid grid_;
  double beta_;
  Nonlinearity nl_;
  int first_;
  int m_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

QuadraticForm form_of(const MinimizeConfig& c) {
  return c.gamma ? QuadraticForm::gamma_form(*c.gamma) : QuadraticForm::efk(c.beta);
}

Nonlinearity nonlinearity_of(const MinimizeConfig& c) {
  if (c.gamma) return Nonlinearity(NonlinearityKind::Cubic, 1.0);
  return Nonlinearity(c.nonlinearity, c.beta);
}

std::vector<int> modes_of(const MinimizeConfig& c, const DomainSpec& d) {
  if (!c.modes.empty()) {
    require(static_cast<int>(c.modes.size()) == d.dim, "one mode count per axis is required");
    return c.modes;
  }
  return std::vector<int>(d.dim, d.dim == 1 ? kDefaultModes1D : kDefaultModes2D);
}

int points_of(const MinimizeConfig& c) { return c.n_points > 0 ? c.n_points : kDefaultRadialPoints; }

double default_delta(double lambda) { return 0.1 * std::min(1.0, 1.0 / std::sqrt(lambda)); }

}  // namespace

SpectralField random_spectral_field(const DomainSpec& domain, const std::vector<int>& modes, std::uint64_t seed,
                                    double amplitude, bool positive) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(domain, modes);
  SineBasis b(domain, modes);
  if (domain.dim == 1) {
    for (int k = 1; k <= std::min(kRandomBand, modes[0]); ++k) f.coeffs()[k - 1] = amplitude * normal(rng) / k;
  } else {
    for (int k1 = 1; k1 <= std::min(kRandomBand, modes[0]); ++k1)
      for (int k2 = 1; k2 <= std::min(kRandomBand, modes[1]); ++k2)
        f.coeffs()[b.flat_index(std::vector<int>{k1, k2})] = amplitude * normal(rng) / (k1 + k2 - 1);
  }
  if (positive) f.coeffs()[0] = amplitude * (2.0 + std::abs(normal(rng)));
  return f;
}

RadialField random_radial_field(const DomainSpec& domain, int n_points, std::uint64_t seed, double amplitude,
                                bool positive) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(kRandomBand);
  for (int k = 0; k < kRandomBand; ++k) c[k] = amplitude * normal(rng) / (k + 1);
  if (positive) c[0] = amplitude * (2.0 + std::abs(normal(rng)));
  const bool ball = domain.kind == DomainKind::Ball;
  const double r0 = ball ? 0.0 : domain.inner_radius;
  const double len = domain.radius - r0;
  return RadialField::sample(domain, n_points, [&](double r) {
    double s = 0.0;
    for (int k = 0; k < kRandomBand; ++k) {
      const double x = (r - r0) / len;
      s += c[k] * (ball ? std::cos((k + 0.5) * std::numbers::pi * x) : std::sin((k + 1) * std::numbers::pi * x));
    }
    return s;
  });
}

Field initial_field(const MinimizeConfig& config, const DomainSpec& domain) {
  domain.validate();
  const InitSpec& init = config.init;
  if (init.kind == InitKind::File) return load_field(init.path);
  if (domain.rectangular()) {
    const auto modes = modes_of(config, domain);
    switch (init.kind) {
      case InitKind::Zero: return SpectralField(domain, modes);
      case InitKind::Random: return random_spectral_field(domain, modes, init.seed, init.amplitude, init.positive);
      default: break;
    }
    const double lam = lambda1_analytic(domain);
    const double delta = init.delta > 0.0 ? init.delta : default_delta(lam);
    return SpectralField::basis(domain, modes, std::vector<int>(domain.dim, 1), delta);
  }
  const int n = points_of(config);
  switch (init.kind) {
    case InitKind::Zero: return RadialField(domain, n);
    case InitKind::Random: return random_radial_field(domain, n, init.seed, init.amplitude, init.positive);
    default: break;
  }
  RadialField phi = phi1_discrete(domain, n);
  const double delta = init.delta > 0.0 ? init.delta : default_delta(lambda1_discrete(domain, n));
  // φ₁ is L²-normalized; rescale so that δ is its amplitude.
  phi *= delta / phi.sup_norm();
  return phi;
}

EnergyReport evaluate_energy(const MinimizeConfig& config, const Field& field) {
  if (const auto* s = std::get_if<SpectralField>(&field)) return energy(*s, form_of(config), nonlinearity_of(config));
  require(!config.gamma, "the gamma functional is only implemented on rectangles");
  return radial_energy(std::get<RadialField>(field), config.beta, config.nonlinearity);
}

MinimizeRun minimize_from(const MinimizeConfig& config, const Field& start) {
  require(config.max_iters > 0, "max_iters must be positive");
  require(config.grad_tol >= 0.0, "grad_tol must be non-negative");
  LbfgsOptions opts;
  opts.max_iters = config.max_iters;
  MinimizeRun run;
  run.field = start;
  if (const auto* s = std::get_if<SpectralField>(&start)) {
    opts.grad_tol = config.grad_tol > 0.0 ? config.grad_tol : kSpectralGradTol;
    SpectralObjective obj(SpectralFunctional(SineBasis(s->domain(), s->modes()), form_of(config), nonlinearity_of(config)));
    LbfgsResult r = lbfgs_minimize(obj, s->coeffs(), opts);
    run.field = SpectralField(s->domain(), s->modes(), std::move(r.x));
    run.iterations = r.iterations;
    run.converged = r.converged;
    run.energy_monotone = r.energy_monotone;
    run.stop_reason = r.stop_reason;
    run.trace = std::move(r.trace);
  } else {
    require(!config.gamma, "the gamma functional is only implemented on rectangles");
    const auto& u = std::get<RadialField>(start);
    opts.grad_tol = config.grad_tol > 0.0 ? config.grad_tol : kRadialGradTol;
    RadialObjective obj(u.grid(), config.beta, Nonlinearity(config.nonlinearity, config.beta));
    const int first = u.grid().first_unknown();
    std::vector<double> x(u.values().begin() + first, u.values().begin() + first + u.grid().unknowns());
    LbfgsResult r = lbfgs_minimize(obj, x, opts);
    run.field = RadialField(u.domain(), u.n_points(), obj.nodes(r.x));
    run.iterations = r.iterations;
    run.converged = r.converged;
    run.energy_monotone = r.energy_monotone;
    run.stop_reason = r.stop_reason;
    run.trace = std::move(r.trace);
  }
  run.report = evaluate_energy(config, run.field);
  return run;
}

namespace {

double field_distance(const Field& a, const Field& b) {
  if (const auto* sa = std::get_if<SpectralField>(&a)) return (*sa - std::get<SpectralField>(b)).l2_norm();
  return (std::get<RadialField>(a) - std::get<RadialField>(b)).l2_norm();
}

}  // namespace

MinimizeResult minimize(const MinimizeConfig& config, const DomainSpec& domain) {
  require(config.multistart >= 1, "multistart must be >= 1");
  if (config.init.kind == InitKind::DeltaPhi1) require(config.init.delta >= 0.0, "delta must be positive");
  MinimizeResult res;
  const int starts = config.init.kind == InitKind::Random ? config.multistart : 1;
  for (int s = 0; s < starts; ++s) {
    MinimizeConfig c = config;
    c.init.seed = config.init.seed + static_cast<std::uint64_t>(s);
    res.runs.push_back(minimize_from(c, initial_field(c, domain)));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.runs.size(); ++i)
    if (res.runs[i].report.j_beta < res.runs[best].report.j_beta) best = i;
  res.best = res.runs[best];
  for (std::size_t i = 0; i < res.runs.size(); ++i)
    for (std::size_t j = i + 1; j < res.runs.size(); ++j)
      if (res.runs[i].converged && res.runs[j].converged)
        res.spread = std::max(res.spread, field_distance(res.runs[i].field, res.runs[j].field));
  return res;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> fine_values(const Field& field) {
  if (const auto* s = std::get_if<SpectralField>(&field)) {
    std::vector<int> pts;
    for (int m : s->modes()) pts.push_back(s->dim() == 1 ? 8 * m + 7 : 4 * m + 3);
    return s->grid_values(pts, true);
  }
  return std::get<RadialField>(field).values();
}

}  // namespace

double fine_min(const Field& field) {
  const auto v = fine_values(field);
  return *std::min_element(v.begin(), v.end());
}

double fine_max(const Field& field) {
  const auto v = fine_values(field);
  return *std::max_element(v.begin(), v.end());
}

double fine_sup_norm(const Field& field) { return std::max(std::abs(fine_min(field)), std::abs(fine_max(field))); }

TruncatedReport minimize_truncated_positive(MinimizeConfig config, const DomainSpec& domain) {
  require(config.beta > 0.0, "beta must be positive");
  config.nonlinearity = NonlinearityKind::TruncatedPos;
  config.gamma.reset();
  TruncatedReport rep;
  rep.run = minimize(config, domain).best;
  rep.m_beta = constant_m_beta(config.beta);
  const double lo = fine_min(rep.run.field);
  const double hi = fine_max(rep.run.field);
  rep.lower_ok = lo >= -1e-6;
  rep.upper_m_ok = hi <= rep.m_beta + 1e-6;
  rep.checks_one = config.beta >= std::sqrt(8.0);
  if (rep.checks_one) rep.upper_one_ok = hi <= 1.0 + 1e-6;
  MinimizeConfig cubic = config;
  cubic.nonlinearity = NonlinearityKind::Cubic;
  const EnergyReport e = evaluate_energy(cubic, rep.run.field);
  rep.cubic_grad_norm = e.grad_norm;
  const double tol = (config.grad_tol > 0.0 ? config.grad_tol
                                            : (domain.rectangular() ? kSpectralGradTol : kRadialGradTol)) *
                     std::max(1.0, l2_norm(rep.run.field));
  rep.cubic_solution = config.beta >= constant_k0() && e.grad_norm < 10.0 * tol;
  rep.defect = !rep.lower_ok || !rep.upper_m_ok || !rep.upper_one_ok;
  return rep;
}

WFieldCheck w_field_check(const Field& field, double beta) {
  WFieldCheck c;
  std::vector<double> w, u;
  if (const auto* s = std::get_if<SpectralField>(&field)) {
    SpectralField wf = *s;
    const auto lam = s->eigenvalues();
    for (std::size_t i = 0; i < wf.size(); ++i) wf.coeffs()[i] = (lam[i] + 0.5 * beta) * s->coeffs()[i];
    w = wf.padded_values();
    u = s->padded_values();
  } else {
    const auto& r = std::get<RadialField>(field);
    const auto& g = r.grid();
    const auto lap = g.laplacian(r.values());
    for (int i = g.first_unknown(); i <= g.last_unknown(); ++i) {
      w.push_back(-lap[i] + 0.5 * beta * r.values()[i]);
      u.push_back(r.values()[i]);
    }
  }
  c.min_w = *std::min_element(w.begin(), w.end());
  c.min_u = *std::min_element(u.begin(), u.end());
  c.holds = c.min_w > -1e-7 && c.min_u > -1e-7;
  return c;
}

double gamma_rescale_residual(const SpectralField& u_gamma, double gamma) {
  require(gamma > 0.0, "rescaling needs gamma > 0");
  const double mu = std::pow(gamma, -0.25);
  const SpectralField w = rescale_domain(u_gamma, mu);
  return gradient(w, 1.0 / std::sqrt(gamma), NonlinearityKind::Cubic).l2_norm();
}

GammaSweep gamma_sweep(const DomainSpec& domain, const std::vector<double>& gammas, MinimizeConfig config) {
  require(domain.rectangular(), "gamma sweeps run on rectangles");
  require(lambda1_analytic(domain) < 1.0, "gamma sweep needs lambda1 < 1");
  require(!gammas.empty(), "gamma list is empty");
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    require(gammas[i] >= 0.0, "gamma must be non-negative");
    if (i > 0) require(gammas[i] < gammas[i - 1], "gammas must be strictly descending");
  }
  GammaSweep sweep;
  config.gamma = gammas.front();
  Field start = initial_field(config, domain);
  for (double g : gammas) {
    config.gamma = g;
    GammaPoint p;
    p.gamma = g;
    p.run = minimize_from(config, start);
    p.sup_norm = fine_sup_norm(p.run.field);
    p.min_value = fine_min(p.run.field);
    if (g > 0.0) p.rescale_residual = gamma_rescale_residual(std::get<SpectralField>(p.run.field), g);
    start = p.run.field;
    sweep.points.push_back(std::move(p));
  }
  for (std::size_t i = 0; i + 1 < sweep.points.size(); ++i) {
    const Field d = std::get<SpectralField>(sweep.points[i].run.field) -
                    std::get<SpectralField>(sweep.points[i + 1].run.field);
    sweep.increments.push_back(fine_sup_norm(d));
  }
  return sweep;
}

}  // namespace efk
