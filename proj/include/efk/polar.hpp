#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "efk/lbfgs.hpp"
#include "efk/radial.hpp"

namespace efk {

// Field on a disk: the radial grid in r times a real Fourier series in θ,
//   u(r_i, θ) = a_{0,i} + Σ_{m=1..Mθ} a_{m,i} cos mθ + b_{m,i} sin mθ.
// Mode 0 lives on nodes 0..n−2, modes m ≥ 1 on nodes 1..n−2 (they vanish at the origin).
class PolarField {
 public:
  PolarField(double radius, int n_points, int angular_modes);

  template <class Fn>  // fn(r, θ)
  static PolarField sample(double radius, int n_points, int angular_modes, Fn fn);

  const RadialGrid& grid() const { return grid_; }
  int angular_modes() const { return modes_; }
  int angles() const { return 4 * modes_ + 4; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  // Offset of mode m (cos when sine = false) at node i in coeffs().
  std::size_t index(int m, bool sine, int node) const;

  // Values at node i on the angles θ_j = 2πj / angles().
  std::vector<double> ring(int node) const;
  RadialField radial_part() const;
  double sup_norm() const;
  double l2_norm() const;

 private:
  RadialGrid grid_;
  int modes_;
  std::vector<double> coeffs_;
};

struct GridField2D {
  double x0 = 0.0;
  double y0 = 0.0;
  double hx = 1.0;
  double hy = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, index ix·ny + iy

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(ix) * ny + iy]; }
  double bilinear(double x, double y) const;
  double sup_norm() const;
};

// Max over radii of the standard deviation of u along the circle.
double angular_defect(const PolarField& u);
// Same on a Cartesian grid, sampling circles about (cx, cy) by bilinear interpolation.
double angular_defect(const GridField2D& u, double cx, double cy, double radius, int radii = 64, int angles = 128);

struct PolarEnergy {
  double value = 0.0;
  std::vector<double> gradient;
};

PolarEnergy polar_energy(const PolarField& u, double beta, NonlinearityKind nonlinearity);

struct PolarRun {
  PolarField field;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

PolarRun minimize_polar(const PolarField& start, double beta, NonlinearityKind nonlinearity, double grad_tol = 1e-8,
                        int max_iters = 20000);

// δ·φ₁-like radial profile plus band-limited random angular content of the given amplitude.
PolarField random_polar_field(double radius, int n_points, int angular_modes, double delta, double amplitude,
                              std::uint64_t seed);

template <class Fn>
PolarField PolarField::sample(double radius, int n_points, int angular_modes, Fn fn) {
  PolarField f(radius, n_points, angular_modes);
  const int na = f.angles();
  const auto& r = f.grid().r();
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i <= f.grid().last_unknown(); ++i) {
    std::vector<double> ring(na);
    for (int j = 0; j < na; ++j) ring[j] = fn(r[i], two_pi * j / na);
    double mean = 0.0;
    for (double v : ring) mean += v;
    f.coeffs_[f.index(0, false, i)] = mean / na;
    if (i == 0) continue;
    for (int m = 1; m <= angular_modes; ++m) {
      double c = 0.0;
      double s = 0.0;
      for (int j = 0; j < na; ++j) {
        c += ring[j] * std::cos(m * two_pi * j / na);
        s += ring[j] * std::sin(m * two_pi * j / na);
      }
      f.coeffs_[f.index(m, false, i)] = 2.0 * c / na;
      f.coeffs_[f.index(m, true, i)] = 2.0 * s / na;
    }
  }
  return f;
}

}  // namespace efk
