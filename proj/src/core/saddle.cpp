#include "efk/saddle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "efk/error.hpp"

namespace efk {

namespace {

int sign_of(int q) { return (q > 0) - (q < 0); }

// One-sided stencils on samples s_j = u(j·h), j = 0..4, each second-order accurate.
double stencil(int order, const std::array<double, 5>& s, double h) {
  switch (order) {
    case 0:
      return 3.0 * s[1] - 3.0 * s[2] + s[3];
    case 1:
      return (-3.0 * s[0] + 4.0 * s[1] - s[2]) / (2.0 * h);
    case 2:
      return (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]) / (h * h);
    default:
      return (-5.0 * s[0] + 18.0 * s[1] - 24.0 * s[2] + 14.0 * s[3] - 3.0 * s[4]) / (2.0 * h * h * h);
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

GridField2D reflect_tile(const SpectralField& quadrant, int points, bool odd) {
  require(quadrant.dim() == 2, "reflection needs a planar field");
  const auto sides = quadrant.domain().sides();
  require(sides[0] == sides[1], "reflection needs a square quadrant");
  const int nq = points + 2;
  const auto q = quadrant.grid_values({points, points}, true);
  GridField2D t;
  t.nx = t.ny = 2 * nq - 1;
  t.hx = t.hy = sides[0] / (points + 1.0);
  t.x0 = t.y0 = -sides[0];
  t.values.resize(static_cast<std::size_t>(t.nx) * t.ny);
  for (int i = 0; i < t.nx; ++i) {
    const int qi = i - (nq - 1);
    for (int j = 0; j < t.ny; ++j) {
      const int qj = j - (nq - 1);
      const double v = q[static_cast<std::size_t>(std::abs(qi)) * nq + std::abs(qj)];
      t.values[static_cast<std::size_t>(i) * t.ny + j] = odd ? sign_of(qi) * sign_of(qj) * v : v;
    }
  }
  return t;
}

SaddleResult build_saddle(double radius, double beta, int modes, double grad_tol) {
  require(radius > 0.0 && beta > 0.0, "saddle needs R > 0 and beta > 0");
  require(modes >= 8, "saddle needs at least 8 modes per axis");
  const DomainSpec domain = DomainSpec::quadrant_square(radius);
  const double lam = lambda1_analytic(domain);
  if (lam * lam + beta * lam >= 1.0)
    fail(ErrorKind::InvalidArgument, "quadrant too small: lambda1^2 + beta*lambda1 >= 1, only u = 0 exists");

  MinimizeConfig config;
  config.beta = beta;
  config.modes = {modes, modes};
  config.grad_tol = grad_tol;
  config.init.kind = InitKind::DeltaPhi1;

  SaddleResult res{SpectralField(domain, {modes, modes}), {}, minimize_truncated_positive(config, domain)};
  res.quadrant = std::get<SpectralField>(res.solve.run.field);
  res.covered = beta >= constant_k0();

  const int points = 2 * modes + 1;
  res.tile = reflect_tile(res.quadrant, points, true);
  const auto& t = res.tile;
  res.min_sign_product = 0.0;
  for (int i = 0; i < t.nx; ++i)
    for (int j = 0; j < t.ny; ++j)
      res.min_sign_product = std::min(res.min_sign_product, t.at(i, j) * (t.x0 + i * t.hx) * (t.y0 + j * t.hy));
  res.sign_ok = res.min_sign_product >= -1e-7;

  // Fine grid on the quadrant for the window bound and the diagonal symmetry.
  const int fine = 4 * modes + 3;
  const int nf = fine + 2;
  const double hf = radius / (fine + 1.0);
  const auto q = res.quadrant.grid_values({fine, fine}, true);
  res.window = 0.5 * radius + 2.0;
  res.window_sup = 0.0;
  double sup = 0.0;
  double diag = 0.0;
  for (int i = 0; i < nf; ++i) {
    for (int j = 0; j < nf; ++j) {
      const double v = q[static_cast<std::size_t>(i) * nf + j];
      sup = std::max(sup, std::abs(v));
      if (i * hf <= res.window && j * hf <= res.window) res.window_sup = std::max(res.window_sup, std::abs(v));
      diag = std::max(diag, std::abs(v - q[static_cast<std::size_t>(j) * nf + i]));
    }
  }
  res.lower_bound_ok = res.window_sup >= 1.0 / std::sqrt(2.0);
  res.diagonal_defect = sup > 0.0 ? diag / sup : 0.0;
  return res;
}

ReflectionReport reflection_smoothness(const SpectralField& quadrant, bool odd) {
  require(quadrant.dim() == 2, "reflection needs a planar field");
  const int points = 2 * quadrant.modes()[0] + 1;
  const GridField2D t = reflect_tile(quadrant, points, odd);
  const int c = (t.nx - 1) / 2;
  ReflectionReport rep;
  rep.h = t.hx;
  rep.jumps.assign(4, 0.0);

  // Normal direction across x = 0 (axis 0) and y = 0 (axis 1), tangential index away from the corners.
  for (int axis = 0; axis < 2; ++axis) {
    for (int k = 0; k < t.ny; ++k) {
      if (std::abs(k - c) < 1) continue;
      auto val = [&](int n) { return axis == 0 ? t.at(c + n, k) : t.at(k, c + n); };
      std::array<double, 5> right{};
      std::array<double, 5> left{};
      for (int j = 0; j < 5; ++j) {
        right[j] = val(j);
        left[j] = val(-j);
      }
      for (int order = 0; order < 4; ++order) {
        const double rs = stencil(order, right, rep.h);
        const double ls = (order % 2 ? -1.0 : 1.0) * stencil(order, left, rep.h);
        rep.jumps[order] = std::max(rep.jumps[order], std::abs(rs - ls));
      }
    }
  }

  const std::vector<int> grid{points, points};
  rep.scale = max_abs(quadrant.grid_values(grid, true));
  for (const auto& orders : {std::vector<int>{3, 0}, {4, 0}, {0, 3}, {0, 4}})
    rep.scale = std::max(rep.scale, max_abs(quadrant.grid_values(grid, true, orders)));

  const auto uxx = quadrant.grid_values(grid, true, {2, 0});
  const auto uyy = quadrant.grid_values(grid, true, {0, 2});
  const int nq = points + 2;
  for (int k = 0; k < nq; ++k) {
    rep.laplacian_trace = std::max(rep.laplacian_trace, std::abs(uxx[k] + uyy[k]));
    const std::size_t col = static_cast<std::size_t>(k) * nq;
    rep.laplacian_trace = std::max(rep.laplacian_trace, std::abs(uxx[col] + uyy[col]));
  }

  rep.threshold = 10.0 * rep.h * rep.h * rep.scale;
  rep.smooth = std::all_of(rep.jumps.begin(), rep.jumps.end(), [&](double j) { return j <= rep.threshold; }) &&
               rep.laplacian_trace <= rep.threshold;
  return rep;
}

GrowthReport saddle_growth_check(const std::vector<SpectralField>& fields, double window, int samples) {
  require(fields.size() >= 2, "growth check needs at least two fields");
  require(samples >= 2, "growth check needs at least two samples per axis");
  GrowthReport rep;
  rep.window = window;
  std::vector<std::vector<double>> values;
  for (const auto& f : fields) {
    require(f.dim() == 2, "growth check needs planar fields");
    const auto sides = f.domain().sides();
    require(sides[0] >= window && sides[1] >= window, "window exceeds a quadrant");
    rep.radii.push_back(sides[0]);
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(samples) * samples);
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples; ++j) {
        const std::array<double, 2> x{window * i / (samples - 1.0), window * j / (samples - 1.0)};
        v.push_back(f.evaluate(x));
      }
    values.push_back(std::move(v));
  }
  for (std::size_t a = 0; a + 1 < values.size(); ++a) {
    double d = 0.0;
    for (std::size_t i = 0; i < values[a].size(); ++i) d = std::max(d, std::abs(values[a][i] - values[a + 1][i]));
    rep.diffs.push_back(d);
  }
  rep.decreasing = true;
  for (std::size_t a = 0; a + 1 < rep.diffs.size(); ++a) rep.decreasing = rep.decreasing && rep.diffs[a + 1] < rep.diffs[a];
  return rep;
}

}  // namespace efk
