#pragma once

#include <span>
#include <vector>

namespace efk {

// Unnormalized DST-I along every axis of a row-major array, in place:
//   y_k = 2 Σ_j x_j sin(π (j+1)(k+1) / (n+1))   per axis.
// Backed by FFTW's RODFT00; plans are cached per shape and shared across threads.
void dst1_inplace(std::span<double> data, std::span<const int> shape);

}  // namespace efk
