#include "efk/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "efk/error.hpp"

namespace efk {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Hyperrectangle: return "hyperrectangle";
    case DomainKind::Ball: return "ball";
    case DomainKind::Annulus: return "annulus";
    case DomainKind::QuadrantSquare: return "quadrant_square";
  }
  return "hyperrectangle";
}

DomainSpec DomainSpec::hyperrectangle(std::vector<double> sides) {
  DomainSpec d;
  d.kind = DomainKind::Hyperrectangle;
  d.dim = static_cast<int>(sides.size());
  d.lengths = std::move(sides);
  d.validate();
  return d;
}

DomainSpec DomainSpec::ball(double radius, int dim) {
  DomainSpec d;
  d.kind = DomainKind::Ball;
  d.dim = dim;
  d.radius = radius;
  d.validate();
  return d;
}

DomainSpec DomainSpec::annulus(double inner, double outer, int dim) {
  DomainSpec d;
  d.kind = DomainKind::Annulus;
  d.dim = dim;
  d.inner_radius = inner;
  d.radius = outer;
  d.validate();
  return d;
}

DomainSpec DomainSpec::quadrant_square(double side) {
  DomainSpec d;
  d.kind = DomainKind::QuadrantSquare;
  d.dim = 2;
  d.radius = side;
  d.validate();
  return d;
}

void DomainSpec::validate() const {
  require(dim >= 1, "domain dimension must be >= 1");
  switch (kind) {
    case DomainKind::Hyperrectangle:
      require(static_cast<int>(lengths.size()) == dim, "hyperrectangle needs one length per axis");
      for (double l : lengths) require(l > 0.0 && std::isfinite(l), "side lengths must be positive");
      break;
    case DomainKind::Ball:
      require(radius > 0.0 && std::isfinite(radius), "ball radius must be positive");
      break;
    case DomainKind::Annulus:
      require(inner_radius > 0.0, "annulus inner radius must be positive");
      require(radius > inner_radius && std::isfinite(radius), "annulus requires R > R0 > 0");
      break;
    case DomainKind::QuadrantSquare:
      require(dim == 2, "quadrant square is planar");
      require(radius > 0.0 && std::isfinite(radius), "quadrant side must be positive");
      break;
  }
}

std::vector<double> DomainSpec::sides() const {
  if (kind == DomainKind::Hyperrectangle) return lengths;
  if (kind == DomainKind::QuadrantSquare) return {radius, radius};
  fail(ErrorKind::InvalidArgument, "sides() requested for a non-rectangular domain");
}

double DomainSpec::volume() const {
  switch (kind) {
    case DomainKind::Hyperrectangle: {
      double v = 1.0;
      for (double l : lengths) v *= l;
      return v;
    }
    case DomainKind::QuadrantSquare: return radius * radius;
    case DomainKind::Ball: return unit_sphere_area(dim) * std::pow(radius, dim) / dim;
    case DomainKind::Annulus:
      return unit_sphere_area(dim) * (std::pow(radius, dim) - std::pow(inner_radius, dim)) / dim;
  }
  return 0.0;
}

bool operator==(const DomainSpec& a, const DomainSpec& b) {
  return a.kind == b.kind && a.dim == b.dim && a.lengths == b.lengths && a.radius == b.radius &&
         a.inner_radius == b.inner_radius;
}

double unit_sphere_area(int dim) {
  const double half = 0.5 * dim;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

constexpr int kBesselTerms = 40;
constexpr double kBesselStop = 1e-16;

}  // namespace

double bessel_j_scaled(double order, double x) {
  require(order > -1.0, "Bessel order must exceed -1");
  const double q = 0.25 * x * x;
  double term = 1.0 / std::tgamma(order + 1.0);
  double sum = term;
  for (int m = 1; m < kBesselTerms; ++m) {
    term *= -q / (m * (m + order));
    sum += term;
    if (std::abs(term) < kBesselStop * std::abs(sum)) break;
  }
  return sum;
}

double bessel_j(double order, double x) {
  if (x == 0.0) return order == 0.0 ? 1.0 : 0.0;
  return std::pow(0.5 * x, order) * bessel_j_scaled(order, x);
}

double bessel_first_zero(double order) {
  if (!(order >= 0.0 && order <= 5.0)) {
    std::ostringstream os;
    os << "Bessel order " << order << " outside the supported range [0, 5]";
    fail(ErrorKind::Unsupported, os.str());
  }
  // J_ν has no zero in (0, ν]; the first one lies below ν + π + 2 for these orders.
  const double a = std::max(order, 1e-3);
  const double b = order + std::numbers::pi + 2.0;
  const int samples = 2048;
  const double step = (b - a) / samples;
  double lo = a;
  double flo = bessel_j_scaled(order, lo);
  double hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= samples; ++i) {
    const double x = a + i * step;
    const double fx = bessel_j_scaled(order, x);
    if ((flo > 0.0) != (fx > 0.0)) {
      hi = x;
      bracketed = true;
      break;
    }
    lo = x;
    flo = fx;
  }
  if (!bracketed) {
    std::ostringstream os;
    os << "no sign change of J_" << order << " on [" << a << ", " << b << "]";
    fail(ErrorKind::NotConverged, os.str());
  }
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j_scaled(order, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

static double ball_first_zero(int dim) {
  if (dim == 1) return 0.5 * std::numbers::pi;
  return bessel_first_zero(0.5 * dim - 1.0);
}

double lambda1_analytic(const DomainSpec& domain) {
  domain.validate();
  switch (domain.kind) {
    case DomainKind::Hyperrectangle:
    case DomainKind::QuadrantSquare: {
      double s = 0.0;
      for (double l : domain.sides()) s += (std::numbers::pi / l) * (std::numbers::pi / l);
      return s;
    }
    case DomainKind::Ball: {
      const double j = ball_first_zero(domain.dim);
      return (j / domain.radius) * (j / domain.radius);
    }
    case DomainKind::Annulus:
      fail(ErrorKind::Unsupported, "annulus eigenvalue has no closed form; use the radial grid");
  }
  return 0.0;
}

double critical_radius(double beta, int dim) {
  require(dim >= 1, "dimension must be >= 1");
  const double j = ball_first_zero(dim);
  return std::sqrt(2.0) * j / std::sqrt(-beta + std::sqrt(beta * beta + 4.0));
}

double bifurcation_beta(double lambda1) {
  require(lambda1 > 0.0, "lambda1 must be positive");
  if (lambda1 >= 1.0) fail(ErrorKind::InvalidArgument, "no bifurcation at positive beta (lambda1 >= 1)");
  return (1.0 - lambda1 * lambda1) / lambda1;
}

double constant_k0() { return std::sqrt(8.0 / (std::sqrt(27.0) - 2.0)); }

double constant_c_beta(double beta) { return std::sqrt((4.0 + beta * beta) / 4.0); }

double constant_m_beta(double beta) {
  return std::pow((4.0 + beta * beta) / 3.0, 1.5) / (beta * beta);
}

BetaConstants beta_constants(double beta, std::optional<double> lambda1) {
  require(beta > 0.0, "beta must be positive");
  BetaConstants c;
  c.beta = beta;
  c.c_beta = constant_c_beta(beta);
  c.m_beta = constant_m_beta(beta);
  c.k0 = constant_k0();
  if (lambda1 && *lambda1 < 1.0) c.beta_bar = bifurcation_beta(*lambda1);
  return c;
}

double scalar_g(double beta, double s, const std::function<double(double)>& f) {
  return 4.0 / (beta * beta) * f(s) + s;
}

double scalar_h(double beta, double s) {
  return scalar_g(beta, s, [](double t) { return t - t * t * t; });
}

namespace {

Extremum golden_max(const std::function<double(double)>& fn, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = fn(x1);
  double f2 = fn(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = fn(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, fn(x)};
}

}  // namespace

Extremum interval_max(const std::function<double(double)>& fn, double a, double b) {
  require(b >= a, "interval must satisfy a <= b");
  if (b == a) return {a, fn(a)};
  const int samples = 2048;
  const double step = (b - a) / samples;
  int best = 0;
  double best_val = fn(a);
  for (int i = 1; i <= samples; ++i) {
    const double v = fn(a + i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double lo = std::max(a, a + (best - 1) * step);
  const double hi = std::min(b, a + (best + 1) * step);
  Extremum refined = golden_max(fn, lo, hi);
  if (refined.value < best_val) return {a + best * step, best_val};
  return refined;
}

Extremum interval_min(const std::function<double(double)>& fn, double a, double b) {
  Extremum e = interval_max([&](double s) { return -fn(s); }, a, b);
  return {e.argument, -e.value};
}

BoundsLemmaCheck bounds_lemma_check(double beta, double u_min, double u_max,
                                    const std::function<double(double)>& f, double tol) {
  require(u_max >= u_min, "range must satisfy u_min <= u_max");
  auto g = [&](double s) { return scalar_g(beta, s, f); };
  BoundsLemmaCheck out;
  out.max_g = interval_max(g, u_min, u_max).value;
  out.min_g = interval_min(g, u_min, u_max).value;
  out.upper_margin = out.max_g - u_max;
  out.lower_margin = u_min - out.min_g;
  out.holds = out.upper_margin >= -tol && out.lower_margin >= -tol;
  return out;
}

}  // namespace efk
