#pragma once

#include <vector>

#include "efk/minimize.hpp"
#include "efk/polar.hpp"

namespace efk {

struct SaddleResult {
  SpectralField quadrant;
  GridField2D tile;              // odd reflection onto (−R, R)²
  TruncatedReport solve;
  double min_sign_product = 0.0;  // min of u·x·y over the tile nodes
  bool sign_ok = false;           // ≥ −1e−7
  double window = 0.0;            // r + 2 with r = R/2
  double window_sup = 0.0;        // ‖u‖∞ on [0, r+2]²
  bool lower_bound_ok = false;    // ≥ 1/√2
  double diagonal_defect = 0.0;   // max |u(x,y) − u(y,x)| / ‖u‖∞
  bool covered = false;           // β ≥ K₀; runs below are exploratory only
};

// Positive solution on (0,R)² with the truncated nonlinearity, reflected oddly across both axes.
// Throws InvalidArgument when λ₁² + βλ₁ ≥ 1 on (0,R)², where only u = 0 exists.
SaddleResult build_saddle(double radius, double beta, int modes, double grad_tol = 1e-9);

// Odd reflection of grid values on [0,R]² (boundary nodes included) onto [−R,R]² by index map.
GridField2D reflect_tile(const SpectralField& quadrant, int points, bool odd = true);

struct ReflectionReport {
  double h = 0.0;
  double scale = 0.0;               // max(‖u‖∞, ‖∂³u‖∞, ‖∂⁴u‖∞) along the normal
  std::vector<double> jumps;        // max jump of derivative orders 0..3 across both axes
  double laplacian_trace = 0.0;     // max |Δu| on the axes
  double threshold = 0.0;           // 10·h²·scale
  bool smooth = false;
};

// Jumps of one-sided second-order difference stencils across x = 0 and y = 0.
ReflectionReport reflection_smoothness(const SpectralField& quadrant, bool odd = true);

struct GrowthReport {
  std::vector<double> radii;
  std::vector<double> diffs;  // sup differences between consecutive radii on the window
  double window = 15.0;
  bool decreasing = false;
};

GrowthReport saddle_growth_check(const std::vector<SpectralField>& fields, double window = 15.0, int samples = 61);

}  // namespace efk
