#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace efk {

enum class DomainKind { Hyperrectangle, Ball, Annulus, QuadrantSquare };

std::string to_string(DomainKind kind);

struct DomainSpec {
  DomainKind kind = DomainKind::Hyperrectangle;
  int dim = 1;
  std::vector<double> lengths;  // hyperrectangle side lengths, one per axis
  double radius = 0.0;           // ball / annulus outer radius, quadrant side
  double inner_radius = 0.0;     // annulus only

  static DomainSpec hyperrectangle(std::vector<double> sides);
  static DomainSpec interval(double length) { return hyperrectangle({length}); }
  static DomainSpec square(double side) { return hyperrectangle({side, side}); }
  static DomainSpec ball(double radius, int dim);
  static DomainSpec annulus(double inner, double outer, int dim);
  static DomainSpec quadrant_square(double side);

  // Throws InvalidArgument when the invariants do not hold.
  void validate() const;

  bool rectangular() const { return kind == DomainKind::Hyperrectangle || kind == DomainKind::QuadrantSquare; }
  bool radial() const { return kind == DomainKind::Ball || kind == DomainKind::Annulus; }
  std::vector<double> sides() const;
  double volume() const;
};

bool operator==(const DomainSpec& a, const DomainSpec& b);

// Surface area of the unit sphere S^{N−1}.
double unit_sphere_area(int dim);

// Bessel function of the first kind by its ascending series.
double bessel_j(double order, double x);
// J_ν(x) / (x/2)^ν, regular at x = 0.
double bessel_j_scaled(double order, double x);
// First positive zero j_{ν,1}; order in [0, 5].
double bessel_first_zero(double order);

// First Dirichlet eigenvalue of −Δ for rectangles and balls (closed form).
// Annuli have no closed form here; use radial::lambda1_discrete.
double lambda1_analytic(const DomainSpec& domain);

// Ball radius at which the nontrivial branch leaves u ≡ 0 for the given β.
double critical_radius(double beta, int dim);

// (1 − λ₁²)/λ₁; throws when λ₁ ≥ 1.
double bifurcation_beta(double lambda1);

struct BetaConstants {
  double beta = 0.0;
  double c_beta = 0.0;  // positive root of h
  double m_beta = 0.0;  // max of h on (0, ∞)
  double k0 = 0.0;
  std::optional<double> beta_bar;
};

BetaConstants beta_constants(double beta, std::optional<double> lambda1 = std::nullopt);
double constant_k0();
double constant_c_beta(double beta);
double constant_m_beta(double beta);

// g(s) = (4/β²) f(s) + s, and h = g with f(s) = s − s³.
double scalar_g(double beta, double s, const std::function<double(double)>& f);
double scalar_h(double beta, double s);

struct Extremum {
  double argument = 0.0;
  double value = 0.0;
};

// Dense sampling followed by golden-section refinement of the best sample.
Extremum interval_max(const std::function<double(double)>& fn, double a, double b);
Extremum interval_min(const std::function<double(double)>& fn, double a, double b);

// Checks ū ≤ max g and u̲ ≥ min g over [u̲, ū] for a solution with range [u_min, u_max].
struct BoundsLemmaCheck {
  double max_g = 0.0;
  double min_g = 0.0;
  double upper_margin = 0.0;  // max g − ū (≥ −tol passes)
  double lower_margin = 0.0;  // u̲ − min g (≥ −tol passes)
  bool holds = false;
};

BoundsLemmaCheck bounds_lemma_check(double beta, double u_min, double u_max,
                                    const std::function<double(double)>& f, double tol = 1e-6);

}  // namespace efk
