#pragma once

#include <string>

namespace efk {

// Right-hand side choices for Δ²u − βΔu = f(u).
//  cubic          f(s) = s − s³
//  truncated_sym  cubic on [−C_β, C_β], constant ±(C_β − C_β³) outside
//  truncated_pos  −(β²/4)s for s < 0, cubic on [0, C_β], constant above C_β
enum class NonlinearityKind { Cubic, TruncatedSym, TruncatedPos };

std::string to_string(NonlinearityKind kind);
NonlinearityKind nonlinearity_from_string(const std::string& name);

// Pointwise data of a nonlinearity. The energy density is potential(s) = −F(s)
// with F(s) = ∫₀ˢ f, so that the functional reads ∫ |Δu|²/2 + β|∇u|²/2 + potential(u).
class Nonlinearity {
 public:
  Nonlinearity(NonlinearityKind kind, double beta);

  NonlinearityKind kind() const { return kind_; }
  double beta() const { return beta_; }
  double cutoff() const { return cutoff_; }

  double f(double s) const;
  double df(double s) const;
  double potential(double s) const;
  double dpotential(double s) const { return -f(s); }

  // potential(a) − potential(b) evaluated without cancellation between the two terms.
  double potential_delta(double a, double b) const;

 private:
  enum class Piece { Negative, Core, Upper, Lower };
  Piece piece(double s) const;
  double piece_delta(Piece p, double a, double b) const;

  NonlinearityKind kind_;
  double beta_;
  double cutoff_;  // C_β
  double f_cut_;   // C_β − C_β³ = −(β²/4) C_β
};

}  // namespace efk
