#pragma once

#include <span>
#include <vector>

#include "efk/domain.hpp"
#include "efk/nonlinearity.hpp"
#include "efk/spectral.hpp"

namespace efk {

// Uniform radial grid r_i = r_0 + i·h, i = 0..n−1, over [0, R] or [R₀, R].
// The Laplacian is written in flux form on dual cells,
//   (Δ_h u)_i = (F_{i+1/2} − F_{i−1/2}) / V_i,  F_{i+1/2} = ρ_{i+1/2}^{N−1} (u_{i+1} − u_i) / h,
// with V_i the exact volume factor ∫ r^{N−1} dr of the dual cell. At the origin the
// formula reduces to the even-extension stencil N·u''(0).
class RadialGrid {
 public:
  RadialGrid(DomainSpec domain, int n_points);

  const DomainSpec& domain() const { return domain_; }
  int dim() const { return domain_.dim; }
  int n_points() const { return n_; }
  double h() const { return h_; }
  double sigma() const { return sigma_; }  // |S^{N−1}|
  const std::vector<double>& r() const { return r_; }
  const std::vector<double>& volumes() const { return volumes_; }
  const std::vector<double>& face_weights() const { return faces_; }  // ρ^{N−1}/h per face i+1/2
  int first_unknown() const { return first_; }
  int last_unknown() const { return n_ - 2; }
  int unknowns() const { return n_ - 1 - first_; }
  bool ball() const { return domain_.kind == DomainKind::Ball; }

  // (K u)_i = −(F_{i+1/2} − F_{i−1/2}) on all nodes, with u taken as given (ends included).
  void apply_stiffness(std::span<const double> u, std::span<double> out) const;
  // Δ_h u at unknown nodes; zero at the Dirichlet ends.
  std::vector<double> laplacian(std::span<const double> u) const;

 private:
  DomainSpec domain_;
  int n_;
  int first_;
  double h_;
  double sigma_;
  std::vector<double> r_;
  std::vector<double> volumes_;
  std::vector<double> faces_;
};

class RadialField {
 public:
  RadialField(DomainSpec domain, int n_points);
  RadialField(DomainSpec domain, int n_points, std::vector<double> values);

  // Samples fn(r) at the nodes, then zeroes the Dirichlet ends.
  template <class Fn>
  static RadialField sample(const DomainSpec& domain, int n_points, Fn fn) {
    RadialField f(domain, n_points);
    const auto& r = f.grid().r();
    for (int i = f.grid().first_unknown(); i <= f.grid().last_unknown(); ++i) f.values_[i] = fn(r[i]);
    return f;
  }

  const DomainSpec& domain() const { return grid_.domain(); }
  const RadialGrid& grid() const { return grid_; }
  int n_points() const { return grid_.n_points(); }
  const std::vector<double>& r() const { return grid_.r(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  bool same_discretization(const RadialField& other) const;

  double sup_norm() const;
  double l2_norm() const;  // (σ Σ V_i u_i²)^{1/2}
  double dot(const RadialField& other) const;

  RadialField& operator+=(const RadialField& other);
  RadialField& operator-=(const RadialField& other);
  RadialField& operator*=(double s);
  friend RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
  friend RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
  friend RadialField operator*(double s, RadialField a) { return a *= s; }

 private:
  RadialGrid grid_;
  std::vector<double> values_;
};

// u and the companion w = −Δu + (β/2)u of the second-order splitting.
struct RadialSystemState {
  RadialField u;
  RadialField w;
  double consistency = 0.0;  // max |Δ_h w + (1 + β²/4)u − u³ − (β/2)w| over interior nodes
};

// J = σ Σ_i [ V_i (Δ_h u)_i²/2 + V_i P(u_i) ] + σ β/2 Σ_faces ρ^{N−1}(u_{i+1} − u_i)²/h.
EnergyReport radial_energy(const RadialField& u, double beta,
                           NonlinearityKind nonlinearity = NonlinearityKind::Cubic);
// Exact gradient of radial_energy with respect to the nodal values (zero at the ends).
RadialField radial_gradient(const RadialField& u, double beta,
                            NonlinearityKind nonlinearity = NonlinearityKind::Cubic);
// (Δ_h² − βΔ_h + V)v in the mass-weighted sense, V = u² − 1 or 3u² − 1.
RadialField radial_apply_linearized(const RadialField& u, double beta, const RadialField& v,
                                    LinearizedPotential potential);

RadialSystemState radial_system_state(const RadialField& u, double beta);

// Smallest eigenvalue of K u = λ V u; converges to λ₁ of the domain at second order.
double lambda1_discrete(const DomainSpec& domain, int n_points);
// Matching positive eigenvector, normalized in the weighted L² norm.
RadialField phi1_discrete(const DomainSpec& domain, int n_points);

struct FlipResult {
  RadialField field;
  bool applied = false;
  double level = 0.0;   // M
  double factor = 0.0;  // (1 − M)/(1 + M) or (m − M)/(m + M)
  int eta = -1;         // junction node
  int mu = -1;          // second junction (annulus)
};

// Energy-decreasing rescaled reflection of a sign-changing profile about its extremum level.
FlipResult flip_transform(const RadialField& u);

struct MonotonicityProfile {
  int sign_changes = 0;
  bool sign_definite = false;
};

MonotonicityProfile monotonicity_profile(const RadialField& u, double rel_tol = 1e-7);

// Sign changes of a derivative sequence ignoring entries below rel_tol·max|d|.
int count_sign_changes(std::span<const double> d, double rel_tol);

}  // namespace efk
