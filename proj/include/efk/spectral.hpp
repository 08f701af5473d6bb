#pragma once

#include <span>
#include <vector>

#include "efk/domain.hpp"
#include "efk/nonlinearity.hpp"

namespace efk {

// Symbol of the quadratic part: bilaplace·λ² + laplace·λ on the eigenvalue λ of −Δ.
// The EFK energy uses (1, β); the γ-functional uses (γ, 1).
struct QuadraticForm {
  double bilaplace = 1.0;
  double laplace = 0.0;

  static QuadraticForm efk(double beta) { return {1.0, beta}; }
  static QuadraticForm gamma_form(double gamma) { return {gamma, 1.0}; }
  double symbol(double lambda) const { return (bilaplace * lambda + laplace) * lambda; }
};

// Tensor sine basis e_k(x) = Π √(2/Lᵢ) sin(kᵢπxᵢ/Lᵢ), kᵢ = 1..Mᵢ, on a hyperrectangle.
// Every basis member satisfies u = Δu = 0 on the boundary. Nonlinear terms are
// evaluated on the padded interior grid with Pᵢ = 2Mᵢ + 1 points per axis, on which
// the trapezoid rule integrates quartic expressions in u exactly.
class SineBasis {
 public:
  SineBasis(DomainSpec domain, std::vector<int> modes);

  const DomainSpec& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  const std::vector<int>& modes() const { return modes_; }
  std::size_t size() const { return size_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<int>& padded_shape() const { return padded_; }
  std::size_t padded_size() const { return padded_size_; }
  double quadrature_weight() const { return weight_; }

  // Coefficients → values on the padded grid.
  void synthesize(std::span<const double> coeffs, std::span<double> grid) const;
  // Adjoint of synthesize scaled by the quadrature weight: c_k = w Σ_j g_j e_k(x_j).
  void analyze(std::span<const double> grid, std::span<double> coeffs) const;

  std::size_t flat_index(std::span<const int> k) const;  // k is 1-based per axis

 private:
  DomainSpec domain_;
  std::vector<int> modes_;
  std::vector<int> padded_;
  std::size_t size_ = 0;
  std::size_t padded_size_ = 0;
  double weight_ = 1.0;
  std::vector<double> eigenvalues_;
  std::vector<double> synth_scale_;
  std::vector<double> analyze_scale_;
};

class SpectralField {
 public:
  SpectralField() = default;  // empty placeholder without modes
  SpectralField(DomainSpec domain, std::vector<int> modes);
  SpectralField(DomainSpec domain, std::vector<int> modes, std::vector<double> coeffs);

  // Single basis member a·e_k with 1-based multi-index k.
  static SpectralField basis(const DomainSpec& domain, const std::vector<int>& modes,
                             const std::vector<int>& k, double amplitude = 1.0);

  const DomainSpec& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  const std::vector<int>& modes() const { return modes_; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }
  bool same_discretization(const SpectralField& other) const;

  // Eigenvalues λ_k of −Δ in flat coefficient order.
  std::vector<double> eigenvalues() const;

  double l2_norm() const;  // Parseval
  double dot(const SpectralField& other) const;

  // Values of ∂^orders u at the uniform grid x_j = j·Lᵢ/(Pᵢ+1).
  // With include_boundary the grid runs j = 0..Pᵢ+1 instead of 1..Pᵢ.
  std::vector<double> grid_values(const std::vector<int>& points, bool include_boundary = false,
                                  const std::vector<int>& orders = {}) const;
  // Collocation values on the Mᵢ-point interior grid.
  std::vector<double> collocation_values() const { return grid_values(modes_); }
  // Values on the padded (2Mᵢ+1)-point grid.
  std::vector<double> padded_values() const;
  double evaluate(std::span<const double> x, const std::vector<int>& orders = {}) const;

  // Inverse of collocation_values.
  static SpectralField from_collocation(const DomainSpec& domain, const std::vector<int>& modes,
                                        std::span<const double> values);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  DomainSpec domain_;
  std::vector<int> modes_;
  std::vector<double> coeffs_;
};

struct BoundFlags {
  bool le_one = false;
  bool le_m_beta = false;
  bool le_c_beta = false;
  bool nonneg = false;
};

struct EnergyReport {
  double j_beta = 0.0;          // the selected functional
  double j_beta_shifted = 0.0;  // j_beta + |Ω|/4
  double grad_norm = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  BoundFlags flags;
};

BoundFlags bound_flags(double u_min, double u_max, double beta, double tol = 1e-6);

// Energy, gradient and Hessian-vector machinery of one functional on one basis.
class SpectralFunctional {
 public:
  SpectralFunctional(SineBasis basis, QuadraticForm form, Nonlinearity nonlinearity);

  const SineBasis& basis() const { return basis_; }
  const QuadraticForm& form() const { return form_; }
  const Nonlinearity& nonlinearity() const { return nonlinearity_; }
  const std::vector<double>& symbols() const { return symbols_; }

  double value(std::span<const double> coeffs) const;
  double value_and_gradient(std::span<const double> coeffs, std::span<double> grad) const;
  // J(c + t·d) − J(c) evaluated term by term.
  double delta(std::span<const double> coeffs, std::span<const double> dir, double t) const;
  double quadratic_value(std::span<const double> coeffs) const;

 private:
  SineBasis basis_;
  QuadraticForm form_;
  Nonlinearity nonlinearity_;
  std::vector<double> symbols_;
};

EnergyReport energy(const SpectralField& u, double beta, NonlinearityKind nonlinearity);
EnergyReport energy(const SpectralField& u, const QuadraticForm& form, const Nonlinearity& nonlinearity);
SpectralField gradient(const SpectralField& u, double beta, NonlinearityKind nonlinearity);
SpectralField gradient(const SpectralField& u, const QuadraticForm& form, const Nonlinearity& nonlinearity);

enum class LinearizedPotential { USquaredMinusOne, ThreeUSquaredMinusOne };

// (Δ² − βΔ + V) v with V = u² − 1 or 3u² − 1, V·v formed on the padded grid.
SpectralField apply_linearized(const SpectralField& u, double beta, const SpectralField& v,
                               LinearizedPotential potential);

// Zero-padding when growing, truncation when shrinking.
SpectralField refine(const SpectralField& u, const std::vector<int>& new_modes);

// Field on the domain scaled by `factor` with w(x) = u(x / factor).
SpectralField rescale_domain(const SpectralField& u, double factor);

// Values of the potential u² − 1 or 3u² − 1 on the padded grid.
std::vector<double> linearized_potential_grid(const SpectralField& u, LinearizedPotential potential);

}  // namespace efk
