#include "efk/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "efk/error.hpp"
#include "efk/sine_transform.hpp"

namespace efk {

namespace {

void check_rectangular(const DomainSpec& domain, const std::vector<int>& modes) {
  require(domain.rectangular(), "spectral fields live on hyperrectangles");
  require(static_cast<int>(modes.size()) == domain.dim, "one mode count per axis is required");
  require(domain.dim == 1 || domain.dim == 2, "spectral discretization supports N = 1, 2");
  for (int m : modes) require(m >= 1, "mode counts must be positive");
}

std::size_t product(const std::vector<int>& v) {
  std::size_t p = 1;
  for (int x : v) p *= static_cast<std::size_t>(x);
  return p;
}

void check_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) fail(ErrorKind::NonFinite, "non-finite coefficient in spectral field");
}

// Matrix of ∂^order e_k at the given points, rows = points, cols = modes.
Eigen::MatrixXd axis_matrix(double length, int modes, const std::vector<double>& x, int order) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(x.size()), modes);
  const double norm = std::sqrt(2.0 / length);
  for (int k = 1; k <= modes; ++k) {
    const double a = k * std::numbers::pi / length;
    const double scale = norm * std::pow(a, order);
    const double phase = 0.5 * std::numbers::pi * order;
    for (std::size_t j = 0; j < x.size(); ++j)
      b(static_cast<Eigen::Index>(j), k - 1) = scale * std::sin(a * x[j] + phase);
  }
  return b;
}

}  // namespace

SineBasis::SineBasis(DomainSpec domain, std::vector<int> modes)
    : domain_(std::move(domain)), modes_(std::move(modes)) {
  check_rectangular(domain_, modes_);
  const auto sides = domain_.sides();
  size_ = product(modes_);
  for (int m : modes_) padded_.push_back(2 * m + 1);
  padded_size_ = product(padded_);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const double l = sides[i];
    const double p1 = padded_[i] + 1.0;
    weight_ *= l / p1;
    synth_scale_.push_back(0.5 * std::sqrt(2.0 / l));
    analyze_scale_.push_back(0.5 * std::sqrt(2.0 / l) * l / p1);
  }
  eigenvalues_.resize(size_);
  if (dim() == 1) {
    for (int k = 1; k <= modes_[0]; ++k) {
      const double a = k * std::numbers::pi / sides[0];
      eigenvalues_[k - 1] = a * a;
    }
  } else {
    for (int k1 = 1; k1 <= modes_[0]; ++k1)
      for (int k2 = 1; k2 <= modes_[1]; ++k2) {
        const double a = k1 * std::numbers::pi / sides[0];
        const double b = k2 * std::numbers::pi / sides[1];
        eigenvalues_[(k1 - 1) * modes_[1] + (k2 - 1)] = a * a + b * b;
      }
  }
}

std::size_t SineBasis::flat_index(std::span<const int> k) const {
  require(static_cast<int>(k.size()) == dim(), "multi-index rank mismatch");
  for (int i = 0; i < dim(); ++i) require(k[i] >= 1 && k[i] <= modes_[i], "mode index out of range");
  if (dim() == 1) return static_cast<std::size_t>(k[0] - 1);
  return static_cast<std::size_t>((k[0] - 1) * modes_[1] + (k[1] - 1));
}

void SineBasis::synthesize(std::span<const double> coeffs, std::span<double> grid) const {
  require(coeffs.size() == size_ && grid.size() == padded_size_, "synthesize: size mismatch");
  std::fill(grid.begin(), grid.end(), 0.0);
  double scale = 1.0;
  for (double s : synth_scale_) scale *= s;
  if (dim() == 1) {
    for (int k = 0; k < modes_[0]; ++k) grid[k] = scale * coeffs[k];
  } else {
    const int p2 = padded_[1];
    for (int k1 = 0; k1 < modes_[0]; ++k1)
      for (int k2 = 0; k2 < modes_[1]; ++k2)
        grid[static_cast<std::size_t>(k1) * p2 + k2] = scale * coeffs[static_cast<std::size_t>(k1) * modes_[1] + k2];
  }
  dst1_inplace(grid, padded_);
}

void SineBasis::analyze(std::span<const double> grid, std::span<double> coeffs) const {
  require(coeffs.size() == size_ && grid.size() == padded_size_, "analyze: size mismatch");
  std::vector<double> scratch(grid.begin(), grid.end());
  dst1_inplace(scratch, padded_);
  double scale = 1.0;
  for (double s : analyze_scale_) scale *= s;
  if (dim() == 1) {
    for (int k = 0; k < modes_[0]; ++k) coeffs[k] = scale * scratch[k];
  } else {
    const int p2 = padded_[1];
    for (int k1 = 0; k1 < modes_[0]; ++k1)
      for (int k2 = 0; k2 < modes_[1]; ++k2)
        coeffs[static_cast<std::size_t>(k1) * modes_[1] + k2] = scale * scratch[static_cast<std::size_t>(k1) * p2 + k2];
  }
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(DomainSpec domain, std::vector<int> modes)
    : domain_(std::move(domain)), modes_(std::move(modes)) {
  check_rectangular(domain_, modes_);
  coeffs_.assign(product(modes_), 0.0);
}

SpectralField::SpectralField(DomainSpec domain, std::vector<int> modes, std::vector<double> coeffs)
    : domain_(std::move(domain)), modes_(std::move(modes)), coeffs_(std::move(coeffs)) {
  check_rectangular(domain_, modes_);
  require(coeffs_.size() == product(modes_), "coefficient count does not match the mode counts");
}

SpectralField SpectralField::basis(const DomainSpec& domain, const std::vector<int>& modes,
                                   const std::vector<int>& k, double amplitude) {
  SpectralField f(domain, modes);
  SineBasis b(domain, modes);
  f.coeffs_[b.flat_index(k)] = amplitude;
  return f;
}

bool SpectralField::same_discretization(const SpectralField& other) const {
  return domain_ == other.domain_ && modes_ == other.modes_;
}

std::vector<double> SpectralField::eigenvalues() const { return SineBasis(domain_, modes_).eigenvalues(); }

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(s);
}

double SpectralField::dot(const SpectralField& other) const {
  require(same_discretization(other), "dot: mismatched discretizations");
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s += coeffs_[i] * other.coeffs_[i];
  return s;
}

std::vector<double> SpectralField::grid_values(const std::vector<int>& points, bool include_boundary,
                                               const std::vector<int>& orders) const {
  require(static_cast<int>(points.size()) == dim(), "grid_values: one point count per axis");
  const auto sides = domain_.sides();
  std::vector<Eigen::MatrixXd> mats;
  for (int i = 0; i < dim(); ++i) {
    const int p = points[i];
    require(p >= 1, "grid_values: point counts must be positive");
    std::vector<double> x;
    const double h = sides[i] / (p + 1.0);
    for (int j = include_boundary ? 0 : 1; j <= (include_boundary ? p + 1 : p); ++j) x.push_back(j * h);
    const int order = orders.empty() ? 0 : orders[i];
    mats.push_back(axis_matrix(sides[i], modes_[i], x, order));
  }
  if (dim() == 1) {
    Eigen::Map<const Eigen::VectorXd> c(coeffs_.data(), modes_[0]);
    Eigen::VectorXd v = mats[0] * c;
    return {v.data(), v.data() + v.size()};
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
      coeffs_.data(), modes_[0], modes_[1]);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> v = mats[0] * c * mats[1].transpose();
  return {v.data(), v.data() + v.size()};
}

std::vector<double> SpectralField::padded_values() const {
  SineBasis b(domain_, modes_);
  std::vector<double> grid(b.padded_size());
  b.synthesize(coeffs_, grid);
  return grid;
}

double SpectralField::evaluate(std::span<const double> x, const std::vector<int>& orders) const {
  require(static_cast<int>(x.size()) == dim(), "evaluate: point rank mismatch");
  const auto sides = domain_.sides();
  std::vector<std::vector<double>> axis(dim());
  for (int i = 0; i < dim(); ++i) {
    const int order = orders.empty() ? 0 : orders[i];
    auto m = axis_matrix(sides[i], modes_[i], {x[i]}, order);
    axis[i].assign(m.data(), m.data() + m.size());
  }
  double s = 0.0;
  if (dim() == 1) {
    for (int k = 0; k < modes_[0]; ++k) s += coeffs_[k] * axis[0][k];
  } else {
    for (int k1 = 0; k1 < modes_[0]; ++k1) {
      double row = 0.0;
      for (int k2 = 0; k2 < modes_[1]; ++k2) row += coeffs_[static_cast<std::size_t>(k1) * modes_[1] + k2] * axis[1][k2];
      s += row * axis[0][k1];
    }
  }
  return s;
}

SpectralField SpectralField::from_collocation(const DomainSpec& domain, const std::vector<int>& modes,
                                              std::span<const double> values) {
  SpectralField f(domain, modes);
  require(values.size() == f.size(), "collocation value count mismatch");
  std::vector<double> work(values.begin(), values.end());
  dst1_inplace(work, modes);
  const auto sides = domain.sides();
  double scale = 1.0;
  for (std::size_t i = 0; i < sides.size(); ++i)
    scale /= 0.5 * std::sqrt(2.0 / sides[i]) * 2.0 * (modes[i] + 1.0);
  for (std::size_t i = 0; i < work.size(); ++i) f.coeffs_[i] = scale * work[i];
  return f;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require(same_discretization(other), "field sum: mismatched discretizations");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require(same_discretization(other), "field difference: mismatched discretizations");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------

BoundFlags bound_flags(double u_min, double u_max, double beta, double tol) {
  BoundFlags f;
  const double sup = std::max(std::abs(u_min), std::abs(u_max));
  f.le_one = sup <= 1.0 + tol;
  f.nonneg = u_min >= -tol;
  if (beta > 0.0) {
    f.le_m_beta = sup <= constant_m_beta(beta) + tol;
    f.le_c_beta = sup <= constant_c_beta(beta) + tol;
  }
  return f;
}

SpectralFunctional::SpectralFunctional(SineBasis basis, QuadraticForm form, Nonlinearity nonlinearity)
    : basis_(std::move(basis)), form_(form), nonlinearity_(nonlinearity) {
  symbols_.resize(basis_.size());
  for (std::size_t i = 0; i < symbols_.size(); ++i) symbols_[i] = form_.symbol(basis_.eigenvalues()[i]);
}

double SpectralFunctional::quadratic_value(std::span<const double> coeffs) const {
  double q = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) q += symbols_[i] * coeffs[i] * coeffs[i];
  return 0.5 * q;
}

double SpectralFunctional::value(std::span<const double> coeffs) const {
  check_finite(coeffs);
  std::vector<double> grid(basis_.padded_size());
  basis_.synthesize(coeffs, grid);
  double p = 0.0;
  for (double u : grid) p += nonlinearity_.potential(u);
  return quadratic_value(coeffs) + basis_.quadrature_weight() * p;
}

double SpectralFunctional::value_and_gradient(std::span<const double> coeffs, std::span<double> grad) const {
  check_finite(coeffs);
  std::vector<double> grid(basis_.padded_size());
  basis_.synthesize(coeffs, grid);
  double p = 0.0;
  for (double& u : grid) {
    p += nonlinearity_.potential(u);
    u = nonlinearity_.dpotential(u);
  }
  basis_.analyze(grid, grad);
  for (std::size_t i = 0; i < coeffs.size(); ++i) grad[i] += symbols_[i] * coeffs[i];
  return quadratic_value(coeffs) + basis_.quadrature_weight() * p;
}

double SpectralFunctional::delta(std::span<const double> coeffs, std::span<const double> dir, double t) const {
  double lin = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    lin += symbols_[i] * coeffs[i] * dir[i];
    quad += symbols_[i] * dir[i] * dir[i];
  }
  std::vector<double> gu(basis_.padded_size());
  std::vector<double> gd(basis_.padded_size());
  basis_.synthesize(coeffs, gu);
  basis_.synthesize(dir, gd);
  double p = 0.0;
  for (std::size_t j = 0; j < gu.size(); ++j) p += nonlinearity_.potential_delta(gu[j] + t * gd[j], gu[j]);
  return t * lin + 0.5 * t * t * quad + basis_.quadrature_weight() * p;
}

EnergyReport energy(const SpectralField& u, const QuadraticForm& form, const Nonlinearity& nonlinearity) {
  for (int m : u.modes()) require(m >= 4, "energy needs at least 4 modes per axis");
  SpectralFunctional fn(SineBasis(u.domain(), u.modes()), form, nonlinearity);
  std::vector<double> grad(u.size());
  EnergyReport r;
  r.j_beta = fn.value_and_gradient(u.coeffs(), grad);
  r.j_beta_shifted = r.j_beta + 0.25 * u.domain().volume();
  double g2 = 0.0;
  for (double g : grad) g2 += g * g;
  r.grad_norm = std::sqrt(g2);
  const auto values = u.padded_values();
  r.u_min = std::min(0.0, *std::min_element(values.begin(), values.end()));
  r.u_max = std::max(0.0, *std::max_element(values.begin(), values.end()));
  r.flags = bound_flags(r.u_min, r.u_max, nonlinearity.beta());
  return r;
}

EnergyReport energy(const SpectralField& u, double beta, NonlinearityKind nonlinearity) {
  return energy(u, QuadraticForm::efk(beta), Nonlinearity(nonlinearity, beta));
}

SpectralField gradient(const SpectralField& u, const QuadraticForm& form, const Nonlinearity& nonlinearity) {
  SpectralFunctional fn(SineBasis(u.domain(), u.modes()), form, nonlinearity);
  SpectralField g(u.domain(), u.modes());
  fn.value_and_gradient(u.coeffs(), g.coeffs());
  return g;
}

SpectralField gradient(const SpectralField& u, double beta, NonlinearityKind nonlinearity) {
  return gradient(u, QuadraticForm::efk(beta), Nonlinearity(nonlinearity, beta));
}

std::vector<double> linearized_potential_grid(const SpectralField& u, LinearizedPotential potential) {
  auto grid = u.padded_values();
  const double c = potential == LinearizedPotential::USquaredMinusOne ? 1.0 : 3.0;
  for (double& x : grid) x = c * x * x - 1.0;
  return grid;
}

SpectralField apply_linearized(const SpectralField& u, double beta, const SpectralField& v,
                               LinearizedPotential potential) {
  if (!u.same_discretization(v)) fail(ErrorKind::InvalidArgument, "apply_linearized: mismatched discretizations");
  SineBasis b(u.domain(), u.modes());
  const auto pot = linearized_potential_grid(u, potential);
  std::vector<double> grid(b.padded_size());
  b.synthesize(v.coeffs(), grid);
  for (std::size_t j = 0; j < grid.size(); ++j) grid[j] *= pot[j];
  SpectralField out(u.domain(), u.modes());
  b.analyze(grid, out.coeffs());
  const QuadraticForm q = QuadraticForm::efk(beta);
  for (std::size_t i = 0; i < out.size(); ++i) out.coeffs()[i] += q.symbol(b.eigenvalues()[i]) * v.coeffs()[i];
  return out;
}

SpectralField refine(const SpectralField& u, const std::vector<int>& new_modes) {
  SpectralField out(u.domain(), new_modes);
  if (u.dim() == 1) {
    const int m = std::min(u.modes()[0], new_modes[0]);
    for (int k = 0; k < m; ++k) out.coeffs()[k] = u.coeffs()[k];
  } else {
    const int m1 = std::min(u.modes()[0], new_modes[0]);
    const int m2 = std::min(u.modes()[1], new_modes[1]);
    for (int k1 = 0; k1 < m1; ++k1)
      for (int k2 = 0; k2 < m2; ++k2)
        out.coeffs()[static_cast<std::size_t>(k1) * new_modes[1] + k2] =
            u.coeffs()[static_cast<std::size_t>(k1) * u.modes()[1] + k2];
  }
  return out;
}

SpectralField rescale_domain(const SpectralField& u, double factor) {
  require(factor > 0.0, "rescale factor must be positive");
  auto sides = u.domain().sides();
  for (double& s : sides) s *= factor;
  SpectralField out(DomainSpec::hyperrectangle(sides), u.modes(), u.coeffs());
  out *= std::pow(factor, 0.5 * u.dim());
  return out;
}

}  // namespace efk
