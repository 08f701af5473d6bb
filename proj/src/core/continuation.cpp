#include "efk/continuation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "efk/error.hpp"
#include "efk/linsolve.hpp"
#include "efk/minimize.hpp"
#include "efk/stability.hpp"

namespace efk {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Cubic EFK residual G(β, u), its u-Jacobian and its β-derivative on one basis.
class BranchSystem {
 public:
  explicit BranchSystem(const SpectralField& shape) : shape_(shape), basis_(shape.domain(), shape.modes()) {
    grid_.resize(basis_.padded_size());
    work_.resize(basis_.padded_size());
  }

  std::size_t size() const { return basis_.size(); }
  const std::vector<double>& eigenvalues() const { return basis_.eigenvalues(); }

  void residual(std::span<const double> u, double beta, std::span<double> g) const {
    basis_.synthesize(u, grid_);
    for (double& x : grid_) x = x * x * x - x;
    basis_.analyze(grid_, g);
    const auto& lam = basis_.eigenvalues();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += (lam[i] + beta) * lam[i] * u[i];
  }

  // Fix the linearization point; J_u v = (Δ² − βΔ + 3u² − 1)v.
  void linearize(std::span<const double> u, double beta) {
    beta_ = beta;
    pot_.resize(basis_.padded_size());
    basis_.synthesize(u, pot_);
    double s = 0.0;
    for (double& x : pot_) {
      x = 3.0 * x * x - 1.0;
      s += x;
    }
    avg_pot_ = s / pot_.size();
  }

  void jacobian(std::span<const double> v, std::span<double> out) const {
    basis_.synthesize(v, work_);
    for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= pot_[j];
    basis_.analyze(work_, out);
    const auto& lam = basis_.eigenvalues();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (lam[i] + beta_) * lam[i] * v[i];
  }

  double diag(std::size_t i) const {
    const double lam = basis_.eigenvalues()[i];
    const double d = (lam + beta_) * lam + avg_pot_;
    return std::abs(d) > 0.05 ? d : (d >= 0.0 ? 0.05 : -0.05);
  }

  // Solve [J_u, b; cᵀ, e] [x; y] = [f; h] with GMRES.
  bool bordered_solve(std::span<const double> b, std::span<const double> c, double e, std::span<const double> f,
                      double h, std::span<double> x, double& y) const {
    const std::size_t n = size();
    LinearOperator a = [&](std::span<const double> in, std::span<double> out) {
      jacobian(in.first(n), out.first(n));
      const double last = in[n];
      for (std::size_t i = 0; i < n; ++i) out[i] += b[i] * last;
      out[n] = dot(c, in.first(n)) + e * last;
    };
    LinearOperator m = [&](std::span<const double> in, std::span<double> out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / diag(i);
      out[n] = in[n];
    };
    std::vector<double> rhs(n + 1), sol(n + 1, 0.0);
    std::copy(f.begin(), f.end(), rhs.begin());
    rhs[n] = h;
    const SolveResult r = gmres(a, m, rhs, sol, 1e-13, static_cast<int>(n) + 2, 4 * static_cast<int>(n) + 8);
    std::copy(sol.begin(), sol.begin() + n, x.begin());
    y = sol[n];
    return r.relative_residual < 1e-9;
  }

  bool solve(std::span<const double> f, std::span<double> x) const {
    const std::size_t n = size();
    LinearOperator a = [&](std::span<const double> in, std::span<double> out) { jacobian(in, out); };
    LinearOperator m = [&](std::span<const double> in, std::span<double> out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / diag(i);
    };
    std::fill(x.begin(), x.end(), 0.0);
    const SolveResult r = gmres(a, m, f, x, 1e-13, static_cast<int>(n) + 1, 4 * static_cast<int>(n) + 8);
    return r.relative_residual < 1e-9;
  }

  void beta_derivative(std::span<const double> u, std::span<double> out) const {
    const auto& lam = basis_.eigenvalues();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = lam[i] * u[i];
  }

  const SpectralField& shape() const { return shape_; }

 private:
  SpectralField shape_;
  SineBasis basis_;
  double beta_ = 0.0;
  double avg_pot_ = 0.0;
  std::vector<double> pot_;
  mutable std::vector<double> grid_;
  mutable std::vector<double> work_;
};

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

BranchPoint make_point(const SpectralField& u, double beta, double residual, int iters, double arclength,
                       bool compute_nu1) {
  BranchPoint p{beta, u};
  p.sup_norm = fine_sup_norm(u);
  p.l2_norm = u.l2_norm();
  p.residual = residual;
  p.newton_iterations = iters;
  p.arclength = arclength;
  if (compute_nu1) p.nu1 = smallest_eigenpair(u, beta, LinearizedPotential::ThreeUSquaredMinusOne).value;
  return p;
}

}  // namespace

double bifurcation_point(const DomainSpec& domain) {
  const double lam = domain.kind == DomainKind::Annulus ? lambda1_discrete(domain, 1025) : lambda1_analytic(domain);
  return bifurcation_beta(lam);
}

double one_mode_amplitude(const DomainSpec& domain, double beta) {
  require(domain.rectangular(), "one-mode seed needs a rectangle");
  const double lam = lambda1_analytic(domain);
  const double drive = 1.0 - lam * lam - beta * lam;
  if (!(drive > 0.0)) fail(ErrorKind::InvalidArgument, "no nontrivial branch: lambda1^2 + beta*lambda1 >= 1");
  double quartic = 1.0;
  for (double l : domain.sides()) quartic *= 3.0 / (2.0 * l);
  return std::sqrt(drive / quartic);
}

NewtonResult newton_solve(const SpectralField& u0, double beta, double tol, int max_iters) {
  BranchSystem sys(u0);
  NewtonResult res{u0};
  const std::size_t n = sys.size();
  std::vector<double> g(n), dx(n);
  auto& u = res.u.coeffs();
  for (int it = 0; it <= max_iters; ++it) {
    sys.residual(u, beta, g);
    res.residual = norm(g);
    res.iterations = it;
    if (!std::isfinite(res.residual)) return res;
    if (res.residual < tol) {
      res.converged = true;
      return res;
    }
    if (it == max_iters) break;
    sys.linearize(u, beta);
    if (!sys.solve(g, dx)) return res;
    for (std::size_t i = 0; i < n; ++i) u[i] -= dx[i];
  }
  return res;
}

BranchPoint seed_branch(const DomainSpec& domain, const std::vector<int>& modes, double epsilon, double newton_tol,
                        bool compute_nu1) {
  const double beta_bar = bifurcation_point(domain);
  require(epsilon > 0.0 && epsilon <= beta_bar / 10.0 + 1e-15, "epsilon must lie in (0, beta_bar/10]");
  double eps = epsilon;
  for (int attempt = 0; attempt <= 6; ++attempt, eps *= 0.5) {
    const double beta = beta_bar - eps;
    const double a = one_mode_amplitude(domain, beta);
    const SpectralField seed = SpectralField::basis(domain, modes, std::vector<int>(domain.dim, 1), a);
    NewtonResult nr = newton_solve(seed, beta, newton_tol);
    if (nr.converged && nr.u.coeffs()[0] > 0.0) return make_point(nr.u, beta, nr.residual, nr.iterations, 0.0, compute_nu1);
  }
  fail(ErrorKind::NotConverged, "seed_branch: Newton failed after halving epsilon 6 times");
}

std::vector<BranchPoint> continue_branch(const ContinuationConfig& config, const BranchPoint& seed) {
  require(config.ds_min > 0.0 && config.ds_min <= config.ds && config.ds <= config.ds_max,
          "continuation needs ds_min <= ds <= ds_max");
  BranchSystem sys(seed.field);
  const std::size_t n = sys.size();
  std::vector<double> u = seed.field.coeffs();
  double beta = seed.beta;
  double s = seed.arclength;
  std::vector<BranchPoint> branch{seed};

  // Initial tangent from J_u du = −G_β with dβ = ±1.
  std::vector<double> gb(n), tu(n), g(n), dx(n);
  sys.linearize(u, beta);
  sys.beta_derivative(u, gb);
  for (double& x : gb) x = -x;
  if (!sys.solve(gb, tu)) fail(ErrorKind::NotConverged, "continuation: tangent solve failed at the seed");
  double tb = 1.0;
  const double sign = config.direction == Direction::DecreasingBeta ? -1.0 : 1.0;
  double tn = std::sqrt(dot(tu, tu) + 1.0);
  for (double& x : tu) x *= sign / tn;
  tb = sign / tn;

  double ds = config.ds;
  const double c1_start = u[0];
  for (int step = 0; step < config.max_steps; ++step) {
    std::vector<double> up(n);
    for (std::size_t i = 0; i < n; ++i) up[i] = u[i] + ds * tu[i];
    const double bp = beta + ds * tb;
    std::vector<double> x = up;
    double b = bp;
    bool ok = false;
    int iters = 0;
    double resid = 0.0;
    for (int it = 0; it <= config.max_newton; ++it) {
      sys.residual(x, b, g);
      double constraint = tb * (b - bp);
      for (std::size_t i = 0; i < n; ++i) constraint += tu[i] * (x[i] - up[i]);
      resid = norm(g);
      iters = it;
      if (!std::isfinite(resid)) break;
      if (resid < config.newton_tol && std::abs(constraint) < 1e-10) {
        ok = true;
        break;
      }
      if (it == config.max_newton) break;
      sys.linearize(x, b);
      sys.beta_derivative(x, gb);
      double db = 0.0;
      if (!sys.bordered_solve(gb, tu, tb, g, constraint, dx, db)) break;
      for (std::size_t i = 0; i < n; ++i) x[i] -= dx[i];
      b -= db;
    }
    if (!ok) {
      ds *= 0.5;
      if (ds < config.ds_min) break;
      continue;
    }
    // New tangent, oriented along the previous one.
    sys.linearize(x, b);
    sys.beta_derivative(x, gb);
    std::vector<double> zero(n, 0.0), nt(n);
    double ntb = 0.0;
    if (!sys.bordered_solve(gb, tu, tb, zero, 1.0, nt, ntb)) {
      ds *= 0.5;
      if (ds < config.ds_min) break;
      continue;
    }
    tn = std::sqrt(dot(nt, nt) + ntb * ntb);
    const double orient = (dot(nt, tu) + ntb * tb) >= 0.0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) tu[i] = orient * nt[i] / tn;
    tb = orient * ntb / tn;

    double du2 = (b - beta) * (b - beta);
    for (std::size_t i = 0; i < n; ++i) du2 += (x[i] - u[i]) * (x[i] - u[i]);
    s += std::sqrt(du2);
    u = x;
    beta = b;
    SpectralField f(seed.field.domain(), seed.field.modes(), u);
    branch.push_back(make_point(f, beta, resid, iters, s, config.compute_nu1));
    if (iters <= 3) ds = std::min(config.ds_max, 1.3 * ds);

    const bool passed = config.direction == Direction::DecreasingBeta ? beta < config.beta_stop
                                                                        : (config.beta_stop > -1e299 && beta > config.beta_stop);
    if (passed) break;
    if (config.stop_at_sign_change && (u[0] > 0.0) != (c1_start > 0.0)) {
      // A few more points past the crossing support the endpoint fit.
      int extra = 0;
      for (std::size_t k = branch.size(); k-- > 1;) {
        if ((branch[k].field.coeffs()[0] > 0.0) == (c1_start > 0.0)) break;
        ++extra;
      }
      if (extra >= 4) break;
    }
  }
  return branch;
}

double branch_endpoint(const std::vector<BranchPoint>& branch) {
  std::size_t cross = 0;
  for (std::size_t k = 1; k < branch.size(); ++k)
    if ((branch[k].field.coeffs()[0] > 0.0) != (branch[k - 1].field.coeffs()[0] > 0.0)) {
      cross = k;
      break;
    }
  if (cross == 0) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t lo = cross >= 4 ? cross - 4 : 0;
  const std::size_t hi = std::min(branch.size(), cross + 4);
  const int count = static_cast<int>(hi - lo);
  const int degree = std::min(4, count - 1);
  Eigen::MatrixXd a(count, degree + 1);
  Eigen::VectorXd y(count);
  for (int r = 0; r < count; ++r) {
    const double c = branch[lo + r].field.coeffs()[0];
    double p = 1.0;
    for (int d = 0; d <= degree; ++d, p *= c) a(r, d) = p;
    y(r) = branch[lo + r].beta;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  return coef(0);
}

AmplitudeLaw amplitude_law(const DomainSpec& domain, const std::vector<int>& modes, const std::vector<double>& eps) {
  require(eps.size() >= 2, "amplitude law needs at least two epsilons");
  AmplitudeLaw law;
  Eigen::MatrixXd a(eps.size(), 2);
  Eigen::VectorXd y(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const BranchPoint p = seed_branch(domain, modes, eps[i], 1e-10, false);
    if (std::abs(p.beta - (bifurcation_point(domain) - eps[i])) > 1e-12)
      fail(ErrorKind::NotConverged, "amplitude law: seed had to shrink epsilon");
    law.epsilons.push_back(eps[i]);
    law.sup_norms.push_back(p.sup_norm);
    a(i, 0) = 1.0;
    a(i, 1) = std::log(eps[i]);
    y(i) = std::log(p.sup_norm);
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
  law.slope = coef(1);
  law.prefactor = std::exp(coef(0));
  return law;
}

NewtonResult branch_solution_at(const std::vector<BranchPoint>& branch, double beta, double tol) {
  require(!branch.empty(), "empty branch");
  std::size_t best = 0;
  for (std::size_t k = 1; k < branch.size(); ++k)
    if (std::abs(branch[k].beta - beta) < std::abs(branch[best].beta - beta)) best = k;
  // Linear interpolation in β between the two neighbours gives a closer Newton start.
  SpectralField start = branch[best].field;
  for (std::size_t k = 0; k + 1 < branch.size(); ++k) {
    const double b0 = branch[k].beta;
    const double b1 = branch[k + 1].beta;
    if ((beta - b0) * (beta - b1) <= 0.0 && b0 != b1) {
      const double t = (beta - b0) / (b1 - b0);
      start = (1.0 - t) * branch[k].field + t * branch[k + 1].field;
      break;
    }
  }
  NewtonResult r = newton_solve(start, beta, tol);
  if (!r.converged) fail(ErrorKind::NotConverged, "Newton correction onto the branch failed");
  return r;
}

UniquenessReport verify_uniqueness_segment(const DomainSpec& domain, const std::vector<BranchPoint>& branch,
                                           const std::vector<double>& betas, int starts, std::uint64_t seed,
                                           double tol) {
  require(!branch.empty(), "uniqueness check needs a computed branch");
  const double beta_bar = bifurcation_point(domain);
  const SpectralField& shape = branch.front().field;
  UniquenessReport rep;
  rep.all_agree = true;
  for (double beta : betas) {
    UniquenessEntry e;
    e.beta = beta;
    SpectralField target(shape.domain(), shape.modes());
    if (beta >= beta_bar) {
      e.trivial = true;
    } else {
      target = branch_solution_at(branch, beta).u;
    }
    MinimizeConfig cfg;
    cfg.beta = beta;
    cfg.modes = shape.modes();
    cfg.init.kind = InitKind::Random;
    cfg.init.positive = true;
    cfg.init.seed = seed;
    cfg.multistart = starts;
    const MinimizeResult mr = minimize(cfg, domain);
    for (const auto& run : mr.runs) {
      if (!run.converged) continue;
      ++e.converged_starts;
      SpectralField diff = std::get<SpectralField>(run.field) - target;
      e.max_distance = std::max(e.max_distance, e.trivial ? fine_sup_norm(diff) : diff.l2_norm());
    }
    e.agree = e.converged_starts == starts && e.max_distance < (e.trivial ? 1e-6 : tol);
    rep.all_agree = rep.all_agree && e.agree;
    rep.entries.push_back(e);
  }
  return rep;
}

double tobias_form(const SpectralField& u, const SpectralField& v, double beta) {
  const SpectralField w = u - v;
  return apply_linearized(u, beta, w, LinearizedPotential::USquaredMinusOne).dot(w);
}

}  // namespace efk
