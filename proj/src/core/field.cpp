#include "efk/field.hpp"

#include <algorithm>
#include <cmath>

#include "efk/error.hpp"

namespace efk {

double sup_norm(const Field& f) {
  if (const auto* s = std::get_if<SpectralField>(&f)) {
    double m = 0.0;
    for (double v : s->padded_values()) m = std::max(m, std::abs(v));
    return m;
  }
  return std::get<RadialField>(f).sup_norm();
}

double l2_norm(const Field& f) {
  return std::visit([](const auto& x) { return x.l2_norm(); }, f);
}

Eigenpair lambda1(const DomainSpec& domain, int resolution) {
  domain.validate();
  if (domain.rectangular()) {
    const int modes = resolution > 0 ? resolution : (domain.dim == 1 ? kDefaultModes1D : kDefaultModes2D);
    std::vector<int> m(domain.dim, modes);
    std::vector<int> k(domain.dim, 1);
    return {lambda1_analytic(domain), SpectralField::basis(domain, m, k)};
  }
  const int n = resolution > 0 ? resolution : kDefaultRadialPoints;
  if (domain.kind == DomainKind::Annulus) {
    RadialField phi = phi1_discrete(domain, n);
    return {lambda1_discrete(domain, n), phi};
  }
  const double value = lambda1_analytic(domain);
  if (domain.dim == 1) {
    const DomainSpec line = DomainSpec::interval(2.0 * domain.radius);
    return {value, SpectralField::basis(line, {kDefaultModes1D}, {1})};
  }
  const double nu = 0.5 * domain.dim - 1.0;
  const double k = std::sqrt(value);
  RadialField phi = RadialField::sample(domain, n, [&](double r) { return bessel_j_scaled(nu, k * r); });
  phi *= 1.0 / phi.l2_norm();
  return {value, phi};
}

}  // namespace efk
