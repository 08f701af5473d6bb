#include "efk/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "efk/error.hpp"

namespace efk {

std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::Cubic: return "cubic";
    case NonlinearityKind::TruncatedSym: return "truncated_sym";
    case NonlinearityKind::TruncatedPos: return "truncated_pos";
  }
  return "cubic";
}

NonlinearityKind nonlinearity_from_string(const std::string& name) {
  if (name == "cubic") return NonlinearityKind::Cubic;
  if (name == "truncated_sym") return NonlinearityKind::TruncatedSym;
  if (name == "truncated_pos") return NonlinearityKind::TruncatedPos;
  fail(ErrorKind::InvalidArgument, "unknown nonlinearity '" + name + "'");
}

Nonlinearity::Nonlinearity(NonlinearityKind kind, double beta) : kind_(kind), beta_(beta) {
  if (kind != NonlinearityKind::Cubic) require(beta > 0.0, "truncated nonlinearities need beta > 0");
  cutoff_ = std::sqrt((4.0 + beta * beta) / 4.0);
  f_cut_ = cutoff_ - cutoff_ * cutoff_ * cutoff_;
}

Nonlinearity::Piece Nonlinearity::piece(double s) const {
  switch (kind_) {
    case NonlinearityKind::Cubic: return Piece::Core;
    case NonlinearityKind::TruncatedSym:
      if (s > cutoff_) return Piece::Upper;
      if (s < -cutoff_) return Piece::Lower;
      return Piece::Core;
    case NonlinearityKind::TruncatedPos:
      if (s < 0.0) return Piece::Negative;
      if (s > cutoff_) return Piece::Upper;
      return Piece::Core;
  }
  return Piece::Core;
}

double Nonlinearity::f(double s) const {
  switch (piece(s)) {
    case Piece::Core: return s - s * s * s;
    case Piece::Negative: return -0.25 * beta_ * beta_ * s;
    case Piece::Upper: return f_cut_;
    case Piece::Lower: return -f_cut_;
  }
  return 0.0;
}

double Nonlinearity::df(double s) const {
  switch (piece(s)) {
    case Piece::Core: return 1.0 - 3.0 * s * s;
    case Piece::Negative: return -0.25 * beta_ * beta_;
    case Piece::Upper:
    case Piece::Lower: return 0.0;
  }
  return 0.0;
}

static double core_potential(double s) {
  const double s2 = s * s;
  return 0.25 * s2 * s2 - 0.5 * s2;
}

double Nonlinearity::potential(double s) const {
  switch (piece(s)) {
    case Piece::Core: return core_potential(s);
    case Piece::Negative: return 0.125 * beta_ * beta_ * s * s;
    case Piece::Upper: return core_potential(cutoff_) - f_cut_ * (s - cutoff_);
    case Piece::Lower: return core_potential(cutoff_) + f_cut_ * (s + cutoff_);
  }
  return 0.0;
}

double Nonlinearity::piece_delta(Piece p, double a, double b) const {
  const double d = a - b;
  switch (p) {
    case Piece::Core: return d * (a + b) * (0.25 * (a * a + b * b) - 0.5);
    case Piece::Negative: return 0.125 * beta_ * beta_ * d * (a + b);
    case Piece::Upper: return -f_cut_ * d;
    case Piece::Lower: return f_cut_ * d;
  }
  return 0.0;
}

double Nonlinearity::potential_delta(double a, double b) const {
  if (kind_ == NonlinearityKind::Cubic) return piece_delta(Piece::Core, a, b);
  const std::array<double, 3> breaks{-cutoff_, 0.0, cutoff_};
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double total = 0.0;
  double left = lo;
  for (double bp : breaks) {
    if (bp <= left || bp >= hi) continue;
    total += piece_delta(piece(0.5 * (left + bp)), bp, left);
    left = bp;
  }
  total += piece_delta(piece(0.5 * (left + hi)), hi, left);
  return a >= b ? total : -total;
}

}  // namespace efk
