#pragma once

#include <variant>

#include "efk/radial.hpp"
#include "efk/spectral.hpp"

namespace efk {

using Field = std::variant<SpectralField, RadialField>;

inline const DomainSpec& domain_of(const Field& f) {
  return std::visit([](const auto& x) -> const DomainSpec& { return x.domain(); }, f);
}

double sup_norm(const Field& f);
double l2_norm(const Field& f);

// Default discretization sizes used when a domain is given without one.
constexpr int kDefaultRadialPoints = 513;
constexpr int kDefaultModes1D = 64;
constexpr int kDefaultModes2D = 64;

struct Eigenpair {
  double value = 0.0;
  Field eigenfunction;
};

// Principal Dirichlet eigenpair of −Δ: closed form on rectangles and balls, the radial
// grid on annuli. The eigenfunction is positive and L²-normalized.
Eigenpair lambda1(const DomainSpec& domain, int resolution = 0);

}  // namespace efk
