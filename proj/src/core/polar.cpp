#include "efk/polar.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "efk/error.hpp"

namespace efk {

PolarField::PolarField(double radius, int n_points, int angular_modes)
    : grid_(DomainSpec::ball(radius, 2), n_points), modes_(angular_modes) {
  require(angular_modes >= 0, "angular mode count must be non-negative");
  coeffs_.assign(static_cast<std::size_t>(n_points - 1) + 2 * static_cast<std::size_t>(angular_modes) * (n_points - 2),
                 0.0);
}

std::size_t PolarField::index(int m, bool sine, int node) const {
  const int n = grid_.n_points();
  if (m == 0) return static_cast<std::size_t>(node);
  return static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(2 * (m - 1) + (sine ? 1 : 0)) * (n - 2) +
         static_cast<std::size_t>(node - 1);
}

std::vector<double> PolarField::ring(int node) const {
  const int na = angles();
  std::vector<double> out(na, node <= grid_.last_unknown() ? coeffs_[index(0, false, node)] : 0.0);
  if (node == 0 || node > grid_.last_unknown()) return out;
  for (int m = 1; m <= modes_; ++m) {
    const double c = coeffs_[index(m, false, node)];
    const double s = coeffs_[index(m, true, node)];
    for (int j = 0; j < na; ++j) {
      const double t = 2.0 * std::numbers::pi * m * j / na;
      out[j] += c * std::cos(t) + s * std::sin(t);
    }
  }
  return out;
}

RadialField PolarField::radial_part() const {
  RadialField f(grid_.domain(), grid_.n_points());
  for (int i = 0; i <= grid_.last_unknown(); ++i) f.values()[i] = coeffs_[index(0, false, i)];
  return f;
}

double PolarField::sup_norm() const {
  double s = 0.0;
  for (int i = 0; i <= grid_.last_unknown(); ++i)
    for (double v : ring(i)) s = std::max(s, std::abs(v));
  return s;
}

double PolarField::l2_norm() const {
  const auto& vol = grid_.volumes();
  double s = 0.0;
  for (int i = 0; i <= grid_.last_unknown(); ++i) {
    const double a = coeffs_[index(0, false, i)];
    s += 2.0 * std::numbers::pi * vol[i] * a * a;
    if (i == 0) continue;
    for (int m = 1; m <= modes_; ++m) {
      const double c = coeffs_[index(m, false, i)];
      const double b = coeffs_[index(m, true, i)];
      s += std::numbers::pi * vol[i] * (c * c + b * b);
    }
  }
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------

double GridField2D::bilinear(double x, double y) const {
  const double fx = (x - x0) / hx;
  const double fy = (y - y0) / hy;
  int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, nx - 2);
  int iy = std::clamp(static_cast<int>(std::floor(fy)), 0, ny - 2);
  const double tx = std::clamp(fx - ix, 0.0, 1.0);
  const double ty = std::clamp(fy - iy, 0.0, 1.0);
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) + (1 - tx) * ty * at(ix, iy + 1) +
         tx * ty * at(ix + 1, iy + 1);
}

double GridField2D::sup_norm() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

namespace {

double ring_std(const std::vector<double>& ring) {
  double mean = 0.0;
  for (double v : ring) mean += v;
  mean /= ring.size();
  double var = 0.0;
  for (double v : ring) var += (v - mean) * (v - mean);
  return std::sqrt(var / ring.size());
}

}  // namespace

double angular_defect(const PolarField& u) {
  double worst = 0.0;
  for (int i = 1; i <= u.grid().last_unknown(); ++i) worst = std::max(worst, ring_std(u.ring(i)));
  return worst;
}

double angular_defect(const GridField2D& u, double cx, double cy, double radius, int radii, int angles) {
  require(u.nx >= 2 && u.ny >= 2, "grid field needs at least 2x2 nodes");
  require(radii >= 1 && angles >= 3, "need at least one radius and three angles");
  double worst = 0.0;
  std::vector<double> ring(angles);
  for (int k = 1; k <= radii; ++k) {
    const double r = radius * k / (radii + 1.0);
    for (int j = 0; j < angles; ++j) {
      const double t = 2.0 * std::numbers::pi * j / angles;
      ring[j] = u.bilinear(cx + r * std::cos(t), cy + r * std::sin(t));
    }
    worst = std::max(worst, ring_std(ring));
  }
  return worst;
}

// ---------------------------------------------------------------------------

namespace {

class PolarObjective : public Objective {
 public:
  PolarObjective(const PolarField& shape, double beta, Nonlinearity nl)
      : shape_(shape), beta_(beta), nl_(nl) {
    const RadialGrid& g = shape_.grid();
    const int n = g.n_points();
    const auto& vol = g.volumes();
    const auto& faces = g.face_weights();
    // Mode 0 block (nodes 0..n−2) and one factorization per m ≥ 1 (nodes 1..n−2).
    for (int m = 0; m <= shape_.angular_modes(); ++m) {
      const int first = m == 0 ? 0 : 1;
      const int size = n - 1 - first;
      const double w = m == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
      std::vector<Eigen::Triplet<double>> tk, tv, tm;
      for (int a = 0; a < size; ++a) {
        const int i = first + a;
        const double left = i > 0 ? faces[i - 1] : 0.0;
        const double ang = m == 0 ? 0.0 : vol[i] * m * m / (g.r()[i] * g.r()[i]);
        tk.emplace_back(a, a, left + faces[i] + ang);
        if (a + 1 < size) {
          tk.emplace_back(a, a + 1, -faces[i]);
          tk.emplace_back(a + 1, a, -faces[i]);
        }
        tv.emplace_back(a, a, 1.0 / vol[i]);
        tm.emplace_back(a, a, vol[i]);
      }
      Eigen::SparseMatrix<double> k(size, size), vinv(size, size), mass(size, size);
      k.setFromTriplets(tk.begin(), tk.end());
      vinv.setFromTriplets(tv.begin(), tv.end());
      mass.setFromTriplets(tm.begin(), tm.end());
      stiff_.push_back(k);
      quad_.push_back(w * (Eigen::SparseMatrix<double>(k * vinv * k) + beta_ * k));
      Eigen::SparseMatrix<double> h = quad_.back() + w * mass;
      auto solver = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(h);
      if (solver->info() != Eigen::Success) fail(ErrorKind::NotConverged, "polar preconditioner factorization failed");
      solvers_.push_back(std::move(solver));
    }
    const int na = shape_.angles();
    cos_.resize(static_cast<std::size_t>(shape_.angular_modes() + 1) * na);
    sin_.resize(cos_.size());
    for (int m = 0; m <= shape_.angular_modes(); ++m)
      for (int j = 0; j < na; ++j) {
        const double t = 2.0 * std::numbers::pi * m * j / na;
        cos_[static_cast<std::size_t>(m) * na + j] = std::cos(t);
        sin_[static_cast<std::size_t>(m) * na + j] = std::sin(t);
      }
  }

  std::size_t size() const override { return shape_.coeffs().size(); }

  double quadratic(std::span<const double> a, std::span<double> grad) const {
    double q = 0.0;
    for (int m = 0; m <= shape_.angular_modes(); ++m) {
      for (int s = 0; s < (m == 0 ? 1 : 2); ++s) {
        const std::size_t off = shape_.index(m, s == 1, m == 0 ? 0 : 1);
        const Eigen::Index size = quad_[m].rows();
        Eigen::Map<const Eigen::VectorXd> x(a.data() + off, size);
        Eigen::VectorXd hx = quad_[m] * x;
        q += 0.5 * x.dot(hx);
        if (!grad.empty())
          for (Eigen::Index i = 0; i < size; ++i) grad[off + i] = hx(i);
      }
    }
    return q;
  }

  // Σ_i V_i (2π/nθ) Σ_j P(u_ij); adds the gradient when requested.
  double potential(std::span<const double> a, std::span<double> grad, std::span<const double> dir = {},
                   double t = 0.0) const {
    const RadialGrid& g = shape_.grid();
    const int na = shape_.angles();
    const int mm = shape_.angular_modes();
    const double dtheta = 2.0 * std::numbers::pi / na;
    std::vector<double> ring(na), dring(na), pr(na);
    double total = 0.0;
    for (int i = 0; i <= g.last_unknown(); ++i) {
      synth(a, i, ring);
      if (!dir.empty()) synth(dir, i, dring);
      const double wv = g.volumes()[i] * dtheta;
      for (int j = 0; j < na; ++j) {
        if (dir.empty()) {
          total += wv * nl_.potential(ring[j]);
          pr[j] = wv * nl_.dpotential(ring[j]);
        } else {
          total += wv * nl_.potential_delta(ring[j] + t * dring[j], ring[j]);
        }
      }
      if (grad.empty()) continue;
      double s0 = 0.0;
      for (int j = 0; j < na; ++j) s0 += pr[j];
      grad[shape_.index(0, false, i)] += s0;
      if (i == 0) continue;
      for (int m = 1; m <= mm; ++m) {
        double c = 0.0;
        double s = 0.0;
        for (int j = 0; j < na; ++j) {
          c += pr[j] * cos_[static_cast<std::size_t>(m) * na + j];
          s += pr[j] * sin_[static_cast<std::size_t>(m) * na + j];
        }
        grad[shape_.index(m, false, i)] += c;
        grad[shape_.index(m, true, i)] += s;
      }
    }
    return total;
  }

  double value(std::span<const double> x) const override { return quadratic(x, {}) + potential(x, {}); }

  double value_and_gradient(std::span<const double> x, std::span<double> g) const override {
    const double q = quadratic(x, g);
    return q + potential(x, g);
  }

  double delta(std::span<const double> x, std::span<const double> d, double t) const override {
    std::vector<double> hd(d.size(), 0.0);
    const double qd = quadratic(d, hd);
    double cross = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) cross += x[i] * hd[i];
    return t * cross + t * t * qd + potential(x, {}, d, t);
  }

  void precondition(std::span<const double> g, std::span<double> out) const override {
    for (int m = 0; m <= shape_.angular_modes(); ++m)
      for (int s = 0; s < (m == 0 ? 1 : 2); ++s) {
        const std::size_t off = shape_.index(m, s == 1, m == 0 ? 0 : 1);
        const Eigen::Index size = quad_[m].rows();
        Eigen::Map<const Eigen::VectorXd> x(g.data() + off, size);
        Eigen::VectorXd z = solvers_[m]->solve(x);
        std::copy(z.data(), z.data() + size, out.begin() + off);
      }
  }

  double norm(std::span<const double> x) const override {
    PolarField f = shape_;
    std::copy(x.begin(), x.end(), f.coeffs().begin());
    return f.l2_norm();
  }

  double dual_norm(std::span<const double> g) const override {
    const RadialGrid& gr = shape_.grid();
    double s = 0.0;
    for (int m = 0; m <= shape_.angular_modes(); ++m) {
      const double w = m == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
      for (int sn = 0; sn < (m == 0 ? 1 : 2); ++sn)
        for (int i = m == 0 ? 0 : 1; i <= gr.last_unknown(); ++i) {
          const double v = g[shape_.index(m, sn == 1, i)];
          s += v * v / (w * gr.volumes()[i]);
        }
    }
    return std::sqrt(s);
  }

 private:
  void synth(std::span<const double> a, int node, std::vector<double>& ring) const {
    const int na = shape_.angles();
    std::fill(ring.begin(), ring.end(), a[shape_.index(0, false, node)]);
    if (node == 0) return;
    for (int m = 1; m <= shape_.angular_modes(); ++m) {
      const double c = a[shape_.index(m, false, node)];
      const double s = a[shape_.index(m, true, node)];
      if (c == 0.0 && s == 0.0) continue;
      for (int j = 0; j < na; ++j)
        ring[j] += c * cos_[static_cast<std::size_t>(m) * na + j] + s * sin_[static_cast<std::size_t>(m) * na + j];
    }
  }

  PolarField shape_;
  double beta_;
  Nonlinearity nl_;
  std::vector<Eigen::SparseMatrix<double>> stiff_;
  std::vector<Eigen::SparseMatrix<double>> quad_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>> solvers_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

}  // namespace

PolarEnergy polar_energy(const PolarField& u, double beta, NonlinearityKind nonlinearity) {
  PolarObjective obj(u, beta, Nonlinearity(nonlinearity, beta));
  PolarEnergy e;
  e.gradient.resize(u.coeffs().size());
  e.value = obj.value_and_gradient(u.coeffs(), e.gradient);
  return e;
}

PolarRun minimize_polar(const PolarField& start, double beta, NonlinearityKind nonlinearity, double grad_tol,
                        int max_iters) {
  PolarObjective obj(start, beta, Nonlinearity(nonlinearity, beta));
  LbfgsOptions opts;
  opts.grad_tol = grad_tol;
  opts.max_iters = max_iters;
  LbfgsResult r = lbfgs_minimize(obj, start.coeffs(), opts);
  PolarRun run{start};
  run.field.coeffs() = r.x;
  run.energy = r.energy;
  run.grad_norm = r.grad_norm;
  run.iterations = r.iterations;
  run.converged = r.converged;
  return run;
}

PolarField random_polar_field(double radius, int n_points, int angular_modes, double delta, double amplitude,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int band = 4;
  std::vector<double> c(static_cast<std::size_t>(angular_modes) * band * 2);
  for (double& x : c) x = amplitude * normal(rng);
  const double j0 = bessel_first_zero(0.0);
  return PolarField::sample(radius, n_points, angular_modes, [&](double r, double t) {
    double v = delta * bessel_j_scaled(0.0, j0 * r / radius);
    for (int m = 1; m <= std::min(angular_modes, band); ++m)
      for (int k = 1; k <= band; ++k) {
        const double prof = std::sin(k * std::numbers::pi * r / radius) / (m * k);
        const std::size_t o = (static_cast<std::size_t>(m - 1) * band + (k - 1)) * 2;
        v += prof * (c[o] * std::cos(m * t) + c[o + 1] * std::sin(m * t));
      }
    return v;
  });
}

}  // namespace efk
